#pragma once

#include <vector>

#include "valleyqed/dynamics.hpp"
#include "valleyqed/lattice.hpp"

namespace vq {

// rho(k) = |a_k|^2 + |b_k|^2 on the discrete grid k_ij = (i/n1) b1 + (j/ny) b2,
// from per-sublattice DFTs over the cell grid. Because the band rotation is
// unitary at each k this is also |eps_alpha,k|^2 + |eps_beta,k|^2.
struct MomentumDensity {
    int n1 = 0;
    int ny = 0;
    double a = 1.0;
    std::vector<Vec2> k;         // grid momentum (i, j), row-major
    std::vector<Vec2> k_folded;  // same point folded into the hexagonal first zone
    std::vector<double> rho;     // raw values
    double max() const;
    double total() const;
};

MomentumDensity momentum_density(const ExcitationState& state, const HoneycombSpec& spec);

struct ValleyIntensities {
    double I_K = 0.0;
    double I_Kp = 0.0;
    // (I_K - I_K') / (I_K + I_K')
    double polarization() const;
    // (I_sel - I_sup) / (I_sel + I_sup) >= 0
    double selectivity() const;
    // min / max
    double suppression_ratio() const;
};

// Sums rho over disks of radius q_cut around every K-type and K'-type zone
// corner (the six hexagon vertices, via reciprocal-lattice equivalence).
// q_cut < 0 selects 0.25 |K|. ConfigError if disks around adjacent corners overlap.
ValleyIntensities valley_intensities(const MomentumDensity& density, double q_cut = -1.0);

struct DecayFit {
    double gamma = 0.0;
    double intercept = 0.0;  // ln|eps|^2 at t = 0 of the fitted line
    double r_squared = 0.0;
    std::size_t points = 0;
};

// Least squares on ln|eps(t)|^2 restricted to lower <= |eps|^2 <= upper.
// FitWindowError if the population never falls below `lower` or fewer than
// three samples lie in the window.
DecayFit fit_decay_rate(const EmissionTrajectory& trajectory, double upper = 0.9, double lower = 0.1);

// Fraction of the photon weight beyond |y| > y_exclusion that lies at
// y < -y_exclusion. y_exclusion < 0 selects 5a. NumericalError if there is
// no weight outside the exclusion zone.
double chirality(const ExcitationState& state, const HoneycombSpec& spec, double y_exclusion = -1.0);

struct SiteDensity {
    Vec2 position;
    Sublattice sublattice;
    double density;
};
std::vector<SiteDensity> real_space_density(const ExcitationState& state, const HoneycombSpec& spec);

}  // namespace vq
