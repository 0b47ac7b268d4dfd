#pragma once

#include <optional>
#include <string>
#include <vector>

#include "valleyqed/lattice.hpp"
#include "valleyqed/sparse.hpp"

namespace vq {

// A-sublattice resonator of cell (n, m) with coupling phase `phase`.
struct CouplingPoint {
    int n = 0;
    int m = 0;
    double phase = 0.0;
};

// Two-level emitter coupled with strength (g / sqrt(N)) e^{i phase_l} to each
// of its N coupling points. N = 1 is an ordinary (small) atom.
class GiantAtomSpec {
public:
    GiantAtomSpec() = default;
    // Phases are reduced to [0, 2 pi). Throws ConfigError on an empty point list.
    GiantAtomSpec(double omega0, double g, std::vector<CouplingPoint> points);

    double omega0() const { return omega0_; }
    double g() const { return g_; }
    const std::vector<CouplingPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    // g / sqrt(N)
    double point_coupling() const;

    // Soft warning once g/J >= 0.5: valley selectivity relies on g << v q_max,
    // i.e. g/J << 3/2.
    std::optional<std::string> weak_coupling_warning(double J) const;

private:
    double omega0_ = 0.0;
    double g_ = 0.0;
    std::vector<CouplingPoint> points_;
};

double wrap_phase(double phase);

struct ModeCouplings {
    cplx g_plus;
    cplx g_minus;
    bool gauge_valid = true;  // false when arg f(k) is undefined and sin(theta/2) != 0
};

// Couplings to the upper (alpha) and lower (beta) Bloch modes at k for a
// lattice of `cell_count` unit cells with uniform detuning `delta`.
ModeCouplings mode_couplings(const GiantAtomSpec& atom, const Vec2& k, double delta, double J, double a,
                             std::size_t cell_count);

// F_tau(q) = sum_l exp(i [phi_l - (tau K + q) . R_l])
cplx structure_factor(const GiantAtomSpec& atom, int tau, const Vec2& q, double a = 1.0);

struct ValleySelectivityReport {
    bool couples_to_tau = false;
    bool decoupled_from_minus_tau = false;
    bool size_ok = false;
    double modulus_tau = 0.0;        // |sum_l z_l(tau)|
    double modulus_minus_tau = 0.0;  // |sum_l z_l(-tau)|
    double max_separation = 0.0;     // max_l |R_l - R_1|
    bool selective() const { return couples_to_tau && decoupled_from_minus_tau && size_ok; }
};

// tol < 0 selects the default 1e-9 * N; size_bound < 0 selects 3a.
ValleySelectivityReport check_valley_selective(const GiantAtomSpec& atom, int tau, double a = 1.0,
                                               double tol = -1.0, double size_bound = -1.0);

// Relative phase phi = phi_2 - phi_1 in [0, 2 pi) that decouples a two-point
// atom with R_2 - R_1 = dn e1 + dm e2 from valley -tau. No solution when
// dn - dm is a multiple of 3 (coupling to valley tau would vanish as well).
std::optional<double> solve_phase_two_points(int delta_n, int delta_m, int tau);

}  // namespace vq
