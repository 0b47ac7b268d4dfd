#include "valleyqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "valleyqed/errors.hpp"

namespace vq {

double ExcitationState::field_weight() const {
    double w = 0.0;
    for (const auto& c : field) w += std::norm(c);
    return w;
}

double ExcitationState::norm() const { return std::sqrt(std::norm(eps) + field_weight()); }

std::vector<cplx> ExcitationState::to_vector() const {
    std::vector<cplx> v(field.begin(), field.end());
    v.push_back(eps);
    return v;
}

ExcitationState ExcitationState::from_vector(std::span<const cplx> v, double time) {
    if (v.empty()) throw std::invalid_argument("ExcitationState::from_vector: empty vector");
    ExcitationState s;
    s.field.assign(v.begin(), v.end() - 1);
    s.eps = v.back();
    s.time = time;
    return s;
}

ExcitationState excited_emitter_state(const HoneycombSpec& spec) {
    ExcitationState s;
    s.eps = 1.0;
    s.field.assign(spec.site_count(), cplx(0.0, 0.0));
    return s;
}

SparseHermitian assemble_total_hamiltonian(const SparseHermitian& lattice, const HoneycombSpec& spec,
                                           const GiantAtomSpec& atom) {
    if (lattice.dimension() != spec.site_count()) {
        throw ConfigError("assemble_total_hamiltonian: lattice operator does not match the lattice spec");
    }
    const std::size_t emitter = spec.site_count();
    SparseHermitian::Builder builder(lattice, emitter + 1);
    builder.add_diagonal(emitter, atom.omega0());
    const double modulus = atom.point_coupling();
    for (const auto& p : atom.points()) {
        if (!spec.contains_cell(p.n, p.m)) {
            std::ostringstream msg;
            msg << "coupling point (" << p.n << ", " << p.m << ") lies outside the lattice";
            throw ConfigError(msg.str());
        }
        const auto site = flatten(spec, {p.n, p.m, Sublattice::A});
        // H_int = sum_l g_l a_l^dag sigma + h.c.: amplitude flows emitter -> site with g_l.
        builder.add_coupling(site, emitter, std::polar(modulus, p.phase));
    }
    return builder.build();
}

double EmissionTrajectory::max_norm_drift() const {
    double d = 0.0;
    for (double n : norms) d = std::max(d, std::abs(n - 1.0));
    return d;
}

double EmissionTrajectory::max_energy_drift() const {
    double d = 0.0;
    for (double e : energies) d = std::max(d, std::abs(e - energies.front()));
    return d;
}

EmissionTrajectory evolve(const SparseHermitian& h, const ExcitationState& psi0, const EvolveOptions& options) {
    if (psi0.field.size() + 1 != h.dimension()) throw std::invalid_argument("evolve: state/operator dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("evolve: initial state must be normalized");
    if (!(options.dt_report > 0.0)) throw std::invalid_argument("evolve: dt_report must be positive");
    if (options.t_final < 0.0) throw std::invalid_argument("evolve: t_final must be non-negative");

    ChebyshevPropagator propagator(h, options.propagator);
    std::vector<cplx> psi = psi0.to_vector();
    EmissionTrajectory traj;
    std::vector<bool> fired(options.population_triggers.size(), false);

    auto record = [&](double t) {
        const double pop = std::norm(psi.back());
        double n2 = 0.0;
        for (const auto& c : psi) n2 += std::norm(c);
        traj.times.push_back(t);
        traj.populations.push_back(pop);
        traj.norms.push_back(std::sqrt(n2));
        if (options.track_energy) traj.energies.push_back(expectation(h, psi));
        for (std::size_t i = 0; i < fired.size(); ++i) {
            if (!fired[i] && pop <= options.population_triggers[i]) {
                fired[i] = true;
                traj.snapshots.push_back({options.population_triggers[i], ExcitationState::from_vector(psi, t)});
            }
        }
    };

    const double t0 = psi0.time;
    record(t0);
    const auto steps = static_cast<std::size_t>(std::ceil(options.t_final / options.dt_report - 1e-9));
    for (std::size_t s = 1; s <= steps; ++s) {
        if (options.stop_after_triggers && !fired.empty() &&
            std::all_of(fired.begin(), fired.end(), [](bool f) { return f; })) {
            break;
        }
        // The last report lands exactly on t_final.
        const double t_prev = t0 + static_cast<double>(s - 1) * options.dt_report;
        const double t_next = std::min(t0 + static_cast<double>(s) * options.dt_report, t0 + options.t_final);
        propagator.step(psi, t_next - t_prev);
        record(t_next);
    }
    std::stable_sort(traj.snapshots.begin(), traj.snapshots.end(),
                     [](const Snapshot& x, const Snapshot& y) { return x.state.time < y.state.time; });
    traj.final_state = ExcitationState::from_vector(psi, traj.times.back());
    traj.matvecs = propagator.total_matvecs();
    return traj;
}

ExcitationState snapshot_at_population(const EmissionTrajectory& trajectory, double threshold) {
    for (const auto& s : trajectory.snapshots) {
        if (s.state.emitter_population() <= threshold) return s.state;
    }
    std::ostringstream msg;
    msg << "emitter population never fell to " << threshold << " within the simulated time";
    if (!trajectory.populations.empty()) {
        msg << " (minimum " << *std::min_element(trajectory.populations.begin(), trajectory.populations.end())
            << " at t <= " << trajectory.times.back() << ")";
    }
    throw TriggerMissError(msg.str());
}

}  // namespace vq
