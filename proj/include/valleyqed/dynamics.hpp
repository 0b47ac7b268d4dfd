#pragma once

#include <cstddef>
#include <vector>

#include "valleyqed/emitter.hpp"
#include "valleyqed/lattice.hpp"
#include "valleyqed/propagator.hpp"
#include "valleyqed/sparse.hpp"

namespace vq {

// Single-excitation state: emitter amplitude plus one amplitude per lattice
// site in flatten() order. As a flat vector the emitter is the last entry.
struct ExcitationState {
    cplx eps{0.0, 0.0};
    std::vector<cplx> field;
    double time = 0.0;

    double emitter_population() const { return std::norm(eps); }
    double field_weight() const;
    double norm() const;

    std::vector<cplx> to_vector() const;
    static ExcitationState from_vector(std::span<const cplx> v, double time);
};

// |e> (x) |vac>
ExcitationState excited_emitter_state(const HoneycombSpec& spec);

// Lattice block plus emitter row: diagonal omega0, links (g/sqrt(N)) e^{i phi_l}
// from the emitter to each coupling A site. Throws ConfigError for coupling
// points outside the lattice.
SparseHermitian assemble_total_hamiltonian(const SparseHermitian& lattice, const HoneycombSpec& spec,
                                           const GiantAtomSpec& atom);

struct EvolveOptions {
    double t_final = 0.0;
    double dt_report = 1.0;
    // A snapshot is stored at the first reported time with |eps|^2 <= threshold.
    std::vector<double> population_triggers;
    // End the run once every trigger has fired.
    bool stop_after_triggers = false;
    bool track_energy = false;
    PropagatorOptions propagator;
};

struct Snapshot {
    double threshold = 0.0;
    ExcitationState state;
};

struct EmissionTrajectory {
    std::vector<double> times;
    std::vector<double> populations;
    std::vector<double> norms;
    std::vector<double> energies;  // filled when track_energy is set
    std::vector<Snapshot> snapshots;
    ExcitationState final_state;
    std::size_t matvecs = 0;

    double max_norm_drift() const;
    double max_energy_drift() const;
};

EmissionTrajectory evolve(const SparseHermitian& h, const ExcitationState& psi0, const EvolveOptions& options);

// First stored snapshot with |eps|^2 <= threshold; TriggerMissError otherwise.
ExcitationState snapshot_at_population(const EmissionTrajectory& trajectory, double threshold = 0.01);

}  // namespace vq
