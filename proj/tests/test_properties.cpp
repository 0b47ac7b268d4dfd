#include <doctest.h>

#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oracles.hpp"
#include "valleyqed/bloch.hpp"
#include "valleyqed/dynamics.hpp"
#include "valleyqed/edgemodes.hpp"
#include "valleyqed/emitter.hpp"
#include "valleyqed/propagator.hpp"
#include "valleyqed/scenario.hpp"

using namespace vq;
constexpr double pi = std::numbers::pi;

namespace {

HoneycombSpec random_spec(oracle::Rng& rng, int max_side = 7) {
    HoneycombSpec s;
    s.n1 = rng.integer(2, max_side);
    s.ny = rng.integer(2, max_side);
    s.a = rng.uniform(0.5, 2.0);
    s.J = rng.uniform(0.5, 1.5);
    s.boundary_e1 = rng.integer(0, 1) ? Boundary::Periodic : Boundary::Open;
    s.boundary_e2 = rng.integer(0, 1) ? Boundary::Periodic : Boundary::Open;
    if (rng.integer(0, 1)) {
        s.detuning = UniformDetuning{rng.uniform(-1, 1)};
    } else {
        s.detuning = DomainWallDetuning{rng.uniform(0.1, 1), rng.uniform(0.5, 4), Vec2(1, 0)};
    }
    return s;
}

GiantAtomSpec random_atom(oracle::Rng& rng, const HoneycombSpec& s) {
    std::vector<CouplingPoint> pts;
    const int n = rng.integer(1, 3);
    for (int i = 0; i < n; ++i) {
        pts.push_back({rng.integer(s.n_min(), s.n_max()), rng.integer(s.m_min(), s.m_max()), rng.uniform(0, 2 * pi)});
    }
    return GiantAtomSpec(rng.uniform(-1, 1), rng.uniform(0.05, 0.6), pts);
}

std::vector<cplx> random_state(oracle::Rng& rng, std::size_t dim) {
    std::vector<cplx> v(dim);
    double n2 = 0.0;
    for (auto& c : v) {
        c = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        n2 += std::norm(c);
    }
    for (auto& c : v) c /= std::sqrt(n2);
    return v;
}

}  // namespace

TEST_CASE("property: the total Hamiltonian is Hermitian") {
    oracle::Rng rng(101);
    for (int t = 0; t < 200; ++t) {
        const auto s = random_spec(rng);
        const auto h = assemble_total_hamiltonian(build_lattice_hamiltonian(s), s, random_atom(rng, s));
        REQUIRE(h.is_exactly_hermitian());
        const Eigen::MatrixXcd d = h.to_dense();
        CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("property: norm and energy are conserved") {
    oracle::Rng rng(202);
    for (int t = 0; t < 30; ++t) {
        const auto s = random_spec(rng, 10);
        const auto h = assemble_total_hamiltonian(build_lattice_hamiltonian(s), s, random_atom(rng, s));
        EvolveOptions o;
        o.t_final = rng.uniform(10, 200);
        o.dt_report = rng.uniform(0.5, 7);
        o.track_energy = true;
        const auto traj = evolve(h, excited_emitter_state(s), o);
        CHECK(traj.max_norm_drift() < 1e-8);
        CHECK(traj.max_energy_drift() < 1e-8);
    }
}

TEST_CASE("property: propagation is linear") {
    oracle::Rng rng(303);
    for (int t = 0; t < 20; ++t) {
        const auto s = random_spec(rng, 6);
        const auto h = assemble_total_hamiltonian(build_lattice_hamiltonian(s), s, random_atom(rng, s));
        const auto x = random_state(rng, h.dimension());
        const auto y = random_state(rng, h.dimension());
        const cplx alpha(rng.uniform(-1, 1), rng.uniform(-1, 1)), beta(rng.uniform(-1, 1), rng.uniform(-1, 1));
        std::vector<cplx> mix(h.dimension());
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = alpha * x[i] + beta * y[i];
        const double dt = rng.uniform(1, 60);
        ChebyshevPropagator p(h);
        auto xs = x, ys = y;
        p.step(xs, dt);
        p.step(ys, dt);
        p.step(mix, dt);
        double worst = 0.0;
        for (std::size_t i = 0; i < mix.size(); ++i) worst = std::max(worst, std::abs(mix[i] - alpha * xs[i] - beta * ys[i]));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("property: sparse propagator matches dense evolution") {
    oracle::Rng rng(404);
    for (int t = 0; t < 15; ++t) {
        const auto s = random_spec(rng, 6);
        const auto atom = random_atom(rng, s);
        const auto h = assemble_total_hamiltonian(build_lattice_hamiltonian(s), s, atom);
        const auto x = random_state(rng, h.dimension());
        auto y = x;
        ChebyshevPropagator(h).step(y, 50.0);
        Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
        for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
        const auto ref = oracle::dense_evolve(oracle::dense_total(s, atom), v, 50.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(y[i] - ref[static_cast<Eigen::Index>(i)]));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("property: structure factor modulus is invariant under phase shifts and y translations") {
    oracle::Rng rng(505);
    for (int t = 0; t < 300; ++t) {
        std::vector<CouplingPoint> pts;
        const int n = rng.integer(1, 5);
        for (int i = 0; i < n; ++i) pts.push_back({rng.integer(-4, 4), rng.integer(-4, 4), rng.uniform(0, 2 * pi)});
        const double shift = rng.uniform(-10, 10);
        const int dm = rng.integer(-6, 6);
        auto moved = pts;
        for (auto& p : moved) {
            p.phase += shift;
            p.m += dm;
        }
        const GiantAtomSpec a(0.0, 0.3, pts), b(0.0, 0.3, moved);
        const Vec2 q(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
        for (int tau : {1, -1}) {
            CHECK(std::abs(structure_factor(a, tau, q)) == doctest::Approx(std::abs(structure_factor(b, tau, q))).epsilon(1e-12));
        }
        const auto p = envelope_params(0.5, 2.0, 1.5, 301);
        const auto ra = decay_rate_giant(a, p), rb = decay_rate_giant(b, p);
        CHECK(ra.plus == doctest::Approx(rb.plus).epsilon(1e-12).scale(1e-20));
        CHECK(ra.minus == doctest::Approx(rb.minus).epsilon(1e-12).scale(1e-20));
    }
}

TEST_CASE("property: solved phases decouple the opposite valley") {
    oracle::Rng rng(606);
    int solved = 0;
    for (int t = 0; t < 400; ++t) {
        const int dn = rng.integer(-5, 5), dm = rng.integer(-5, 5);
        const int tau = rng.integer(0, 1) ? 1 : -1;
        const auto phi = solve_phase_two_points(dn, dm, tau);
        if ((dn - dm) % 3 == 0) {
            CHECK_FALSE(phi);
            continue;
        }
        REQUIRE(phi);
        ++solved;
        const int n0 = rng.integer(-3, 3), m0 = rng.integer(-3, 3);
        const double phi0 = rng.uniform(0, 2 * pi);
        const GiantAtomSpec atom(0.0, 0.2, {{n0, m0, phi0}, {n0 + dn, m0 + dm, phi0 + *phi}});
        CHECK(std::abs(structure_factor(atom, -tau, Vec2(0, 0))) < 1e-13);
        CHECK(std::abs(structure_factor(atom, tau, Vec2(0, 0))) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
        CHECK(oracle::interference(atom, -tau) < 1e-26);
    }
    CHECK(solved > 200);
}

TEST_CASE("property: decay rates scale with g squared") {
    oracle::Rng rng(707);
    for (int t = 0; t < 100; ++t) {
        const auto p = envelope_params(rng.uniform(0.1, 1), rng.uniform(0.5, 5), 1.5, rng.integer(20, 400));
        const double g = rng.uniform(0.01, 0.5), c = rng.uniform(0.1, 5);
        const double x = 1.5 * rng.integer(-5, 5);
        CHECK(decay_rate_normal(x, c * g, p).total == doctest::Approx(c * c * decay_rate_normal(x, g, p).total).epsilon(1e-12));
        const GiantAtomSpec a(0.0, g, {{0, 0, 0.0}, {0, 1, rng.uniform(0, 2 * pi)}});
        const GiantAtomSpec b(0.0, c * g, a.points());
        CHECK(decay_rate_giant(b, p).plus == doctest::Approx(c * c * decay_rate_giant(a, p).plus).epsilon(1e-12));
    }
}

TEST_CASE("property: band energies are even in k and periodic in the reciprocal lattice") {
    oracle::Rng rng(808);
    for (int t = 0; t < 500; ++t) {
        const double a = rng.uniform(0.5, 2);
        const Vec2 k(rng.uniform(-6, 6), rng.uniform(-6, 6));
        const double delta = rng.uniform(-1, 1);
        const double w = band_energy(k, delta, 1.0, a);
        CHECK(band_energy(-k, delta, 1.0, a) == doctest::Approx(w).epsilon(1e-13));
        const Vec2 G = rng.integer(-3, 3) * reciprocal_b1(a) + rng.integer(-3, 3) * reciprocal_b2(a);
        CHECK(band_energy(k + G, delta, 1.0, a) == doctest::Approx(w).epsilon(1e-12));
        CHECK(w >= std::abs(delta));
    }
}

TEST_CASE("property: propagation does not depend on the thread count") {
#ifdef _OPENMP
    HoneycombSpec s;
    s.n1 = s.ny = 60;
    s.detuning = UniformDetuning{0.5};
    const auto h = assemble_total_hamiltonian(build_lattice_hamiltonian(s), s, GiantAtomSpec(0.7, 0.2, {{0, 0, 0.0}}));
    auto run_with = [&](int threads) {
        omp_set_num_threads(threads);
        auto psi = excited_emitter_state(s).to_vector();
        ChebyshevPropagator(h).step(psi, 30.0);
        return psi;
    };
    const int saved = omp_get_max_threads();
    const auto one = run_with(1), again = run_with(1), four = run_with(4);
    omp_set_num_threads(saved);
    double same = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < one.size(); ++i) {
        same = std::max(same, std::abs(one[i] - again[i]));
        cross = std::max(cross, std::abs(one[i] - four[i]));
    }
    CHECK(same == 0.0);
    CHECK(cross < 1e-12);
#endif
}

// Chiral-emission observables at snapshot time barely move when the lattice grows by 50%.
TEST_CASE("boundary insensitivity of the chiral emission observables") {
    auto measure = [](int size) {
        auto c = default_config(ScenarioKind::ChiralEmission);
        c.n1 = c.ny = size;
        c.output_dir = (std::filesystem::temp_directory_path() / ("valleyqed_boundary_" + std::to_string(size))).string();
        RunOptions o;
        o.atoms = AtomSelection::Giant;
        return run_scenario(c, o).metrics.at("giant");
    };
    const auto small = measure(301), large = measure(451);
    for (const char* key : {"gamma", "chirality_down", "snapshot_time"}) {
        const double x = small.at(key).get<double>(), y = large.at(key).get<double>();
        MESSAGE(std::string(key) << ": " << x << " vs " << y);
        CHECK(std::abs(x - y) <= 0.01 * std::abs(y));
    }
}
