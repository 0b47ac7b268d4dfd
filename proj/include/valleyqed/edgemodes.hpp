#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "valleyqed/emitter.hpp"
#include "valleyqed/lattice.hpp"

namespace vq {

// ---------------------------------------------------------------------------
// Ribbon: the domain-wall lattice Fourier transformed along y.
//
// Amplitudes c(n, m) = exp(i ky y_R) u(n) with y_R the y coordinate of cell
// R = n e1 + m e2. The transverse operator acts on u = (A_n, B_n) for the n1
// cell columns (open along e1); hoppings pick up exp(i ky dy) for each of the
// three neighbour displacements.
// ---------------------------------------------------------------------------

// Requires an x-directed wall (or uniform detuning) and Open boundary along e1;
// UnsupportedGeometry otherwise.
Eigen::MatrixXcd ribbon_hamiltonian(const HoneycombSpec& spec, double ky);

struct InGapMode {
    std::size_t ky_index = 0;
    Eigen::Index band = 0;
    double omega = 0.0;
    Eigen::VectorXcd vector;
};

struct RibbonSpectrum {
    int nx = 0;
    double a = 1.0;
    double J = 1.0;
    double gap_edge = 0.0;  // Delta0 (|Delta| for a uniform lattice)
    std::vector<double> ky;
    std::vector<Eigen::VectorXd> eigenvalues;  // ascending, one vector per ky
    std::vector<InGapMode> in_gap_modes;       // eigenvectors kept only for |omega| < gap_edge

    bool in_gap(double omega) const;
};

// ky_nu = -pi/(sqrt3 a) + nu 2 pi/(n_ky sqrt3 a), nu = 0 .. n_ky-1; n_ky <= 0 uses spec.ny.
RibbonSpectrum compute_ribbon_spectrum(const HoneycombSpec& spec, int n_ky = -1);

struct RibbonMode {
    double ky = 0.0;
    double omega = 0.0;
    Eigen::VectorXcd vector;
    double residual = 0.0;  // ||H v - omega v||
};
// Eigenmode at ky whose energy is closest to target_omega.
RibbonMode ribbon_mode(const HoneycombSpec& spec, double ky, double target_omega);

// Projection of K_tau on the ky axis, and the valley a ribbon momentum belongs
// to (nearest projection modulo the ky period 2 pi/(sqrt3 a)).
double valley_ky_projection(int tau, double a = 1.0);
int ribbon_valley(double ky, double a = 1.0);
// ky - projection(tau), reduced to the ky period's symmetric interval.
double ribbon_valley_offset(double ky, int tau, double a = 1.0);

// An eigenvalue crossing zero between consecutive ky samples (cyclic).
// direction = +1 when a level moves from negative to positive as ky grows.
struct ZeroCrossing {
    double ky = 0.0;
    int direction = 0;
    int valley = 0;
};
std::vector<ZeroCrossing> zero_crossings(const RibbonSpectrum& spectrum);

// Least-squares slope d omega / d ky of the in-gap branch of valley tau over
// |omega| <= window_fraction * Delta0. In lattice coordinates the branch near
// the projection of K runs with slope -v, the one near K' with +v.
// DomainError if the valley has fewer than two in-gap samples in the window.
double edge_dispersion_fit(const RibbonSpectrum& spectrum, int tau, double window_fraction = 0.5);

// ---------------------------------------------------------------------------
// Envelope of the zero mode for Delta(x) = Delta0 tanh(x / lambda).
// ---------------------------------------------------------------------------

struct EnvelopeParams {
    double delta0 = 0.0;
    double lambda = 1.0;
    double v = 1.5;
    double a = 1.0;
    int nx = 0;
    double xi = 0.0;            // v / Delta0
    double beta_profile = 0.0;  // lambda / xi, exponent of cosh in psi
    double beta_norm = 0.0;     // 2 beta_profile, exponent in |psi|^2
    double A = 0.0;             // discrete normalization over x_n = 3a n / 2
    double continuum_prefactor = 0.0;  // [Gamma(b + 1/2) / (lambda sqrt(pi) Gamma(b))]^{1/2}
};

EnvelopeParams envelope_params(double delta0, double lambda, double v, int nx, double a = 1.0);
// From a domain-wall lattice spec with v = 3aJ/2.
EnvelopeParams envelope_params(const HoneycombSpec& spec);

// Continuum profile, normalized to unit integral of |psi|^2 over x (units 1/sqrt(length)).
double envelope_continuum(double x, const EnvelopeParams& p);
// Dimensionless discrete profile, sum_n |psi(x_n)|^2 = 1 over the nx columns.
double envelope_discrete(double x, const EnvelopeParams& p);
// Discrete profile evaluated on all cell columns, n = -nx/2 .. nx/2-1.
std::vector<double> envelope_discrete_columns(const EnvelopeParams& p);

// Column amplitude (|u_A(n)| + |u_B(n)|) / sqrt2 of a ribbon eigenvector; for
// the zero mode |u_A| = |u_B| = psi_d / sqrt2, so this reproduces psi_d.
std::vector<double> ribbon_column_profile(const Eigen::VectorXcd& mode);
// (sum_n column_profile(n) psi_d(x_n))^2, 1 for a perfect match.
double envelope_overlap(const Eigen::VectorXcd& mode, const EnvelopeParams& p);

// int_0^inf cosh^{-b}(s) ds = (sqrt(pi)/2) Gamma(b/2) / Gamma((b+1)/2)
double cosh_power_integral(double beta_prime);

struct ZeroModeProfile {
    int tau = 1;
    double step = 0.0;
    std::vector<double> x;
    std::vector<cplx> psi_a;
    std::vector<cplx> psi_b;
    double estimated_error = 0.0;  // step-doubling difference, relative to max |psi|
};

// Integrates Delta psi_a - i tau v psi_b' = 0, -Delta psi_b - i tau v psi_a' = 0
// outward from x = 0 with psi(0) proportional to (1, i tau), then normalizes
// the spinor to unit integral on [-x_max, x_max]. Fixed-step RK4; a
// step-doubling error above 1e-4 (relative) raises NumericalError.
ZeroModeProfile zero_mode_ode_oracle(const std::function<double(double)>& delta, double v, int tau, double x_max,
                                     double step);

// LDOS of one valley's edge band on the A resonator at x:
// sqrt3 a / (4 pi v) |psi_d(x)|^2 (independent of omega and tau).
double local_dos_edge(double x, const EnvelopeParams& p);

struct NormalDecayRate {
    double per_valley = 0.0;
    double total = 0.0;
};
// Golden-rule rate 2 pi g^2 rho into each valley's edge band for an atom on
// the A resonator at x_R. DomainError if |omega0| >= Delta0.
NormalDecayRate decay_rate_normal(double x_R, double g, const EnvelopeParams& p, double omega0 = 0.0);

struct GiantDecayRates {
    double plus = 0.0;   // valley K
    double minus = 0.0;  // valley K'
    // Set when the footprint is not small against xi (max |x_l - x_1| > xi/2).
    std::optional<std::string> footprint_warning;
    double rate(int tau) const { return tau == 1 ? plus : minus; }
};
// Gamma_tau = (1/N) |sum_l exp(i (tau K . R_l - phi_l))|^2 Gamma_tau(R_1).
GiantDecayRates decay_rate_giant(const GiantAtomSpec& atom, const EnvelopeParams& p);

}  // namespace vq
