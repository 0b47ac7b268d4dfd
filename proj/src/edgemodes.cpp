#include "valleyqed/edgemodes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "valleyqed/bloch.hpp"
#include "valleyqed/errors.hpp"

namespace vq {

namespace {

constexpr double pi = std::numbers::pi;
const double sqrt3 = std::sqrt(3.0);

double ky_period(double a) { return 2.0 * pi / (sqrt3 * a); }

double reduce_symmetric(double x, double period) {
    double r = std::fmod(x, period);
    if (r >= 0.5 * period) r -= period;
    if (r < -0.5 * period) r += period;
    return r;
}

void check_ribbon_geometry(const HoneycombSpec& spec) {
    spec.validate();
    if (spec.boundary_e1 != Boundary::Open) {
        throw UnsupportedGeometry("ribbon: the boundary along e1 must be open");
    }
    if (const auto* w = spec.detuning.domain_wall(); w && std::abs(w->direction.y()) > 1e-12) {
        throw UnsupportedGeometry("ribbon: the domain wall must vary along x only");
    }
}

double gap_edge_of(const HoneycombSpec& spec) {
    if (const auto* w = spec.detuning.domain_wall()) return std::abs(w->delta0);
    return std::abs(spec.detuning.uniform()->delta);
}

}  // namespace

Eigen::MatrixXcd ribbon_hamiltonian(const HoneycombSpec& spec, double ky) {
    check_ribbon_geometry(spec);
    const int nx = spec.n1;
    const double dy = 0.5 * sqrt3 * spec.a;
    // B(n-1, m) sits at dy = -sqrt3 a/2, B(n-1, m+1) at +sqrt3 a/2 relative to A(n, m).
    const cplx inter = spec.J * (std::polar(1.0, -ky * dy) + std::polar(1.0, ky * dy));
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * nx, 2 * nx);
    for (int i = 0; i < nx; ++i) {
        const int n = spec.n_min() + i;
        const double delta = spec.detuning.at(cell_vector(n, 0, spec.a));
        h(2 * i, 2 * i) = delta;
        h(2 * i + 1, 2 * i + 1) = -delta;
        h(2 * i, 2 * i + 1) = spec.J;
        h(2 * i + 1, 2 * i) = spec.J;
        if (i > 0) {
            h(2 * i, 2 * i - 1) = inter;
            h(2 * i - 1, 2 * i) = std::conj(inter);
        }
    }
    return h;
}

bool RibbonSpectrum::in_gap(double omega) const { return std::abs(omega) < gap_edge - 1e-9 * std::max(1.0, J); }

RibbonSpectrum compute_ribbon_spectrum(const HoneycombSpec& spec, int n_ky) {
    check_ribbon_geometry(spec);
    if (n_ky <= 0) n_ky = spec.ny;
    RibbonSpectrum out;
    out.nx = spec.n1;
    out.a = spec.a;
    out.J = spec.J;
    out.gap_edge = gap_edge_of(spec);
    out.ky.resize(static_cast<std::size_t>(n_ky));
    out.eigenvalues.resize(static_cast<std::size_t>(n_ky));
    std::vector<std::vector<InGapMode>> modes(static_cast<std::size_t>(n_ky));
    std::vector<double> residuals(static_cast<std::size_t>(n_ky), 0.0);

    const double step = ky_period(spec.a) / n_ky;
#pragma omp parallel for schedule(dynamic)
    for (int nu = 0; nu < n_ky; ++nu) {
        const double ky = -0.5 * ky_period(spec.a) + nu * step;
        const Eigen::MatrixXcd h = ribbon_hamiltonian(spec, ky);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
        const auto idx = static_cast<std::size_t>(nu);
        out.ky[idx] = ky;
        out.eigenvalues[idx] = solver.eigenvalues();
        const Eigen::MatrixXcd& vecs = solver.eigenvectors();
        const Eigen::MatrixXcd r = h * vecs - vecs * solver.eigenvalues().asDiagonal();
        residuals[idx] = r.colwise().norm().maxCoeff();
        for (Eigen::Index b = 0; b < solver.eigenvalues().size(); ++b) {
            const double w = solver.eigenvalues()[b];
            if (out.in_gap(w)) modes[idx].push_back({idx, b, w, vecs.col(b)});
        }
    }
    const double worst = *std::max_element(residuals.begin(), residuals.end());
    if (worst > 1e-10 * std::max(1.0, std::abs(spec.J))) {
        std::ostringstream msg;
        msg << "ribbon eigensolver residual " << worst << " exceeds tolerance";
        throw NumericalError(msg.str());
    }
    for (auto& m : modes) {
        for (auto& mode : m) out.in_gap_modes.push_back(std::move(mode));
    }
    return out;
}

RibbonMode ribbon_mode(const HoneycombSpec& spec, double ky, double target_omega) {
    const Eigen::MatrixXcd h = ribbon_hamiltonian(spec, ky);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const auto& w = solver.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index b = 1; b < w.size(); ++b) {
        if (std::abs(w[b] - target_omega) < std::abs(w[best] - target_omega)) best = b;
    }
    RibbonMode mode;
    mode.ky = ky;
    mode.omega = w[best];
    mode.vector = solver.eigenvectors().col(best);
    mode.residual = (h * mode.vector - mode.omega * mode.vector).norm();
    return mode;
}

double valley_ky_projection(int tau, double a) {
    if (tau != 1 && tau != -1) throw std::invalid_argument("valley index must be +1 or -1");
    return dirac_point(tau, a).y();
}

double ribbon_valley_offset(double ky, int tau, double a) {
    return reduce_symmetric(ky - valley_ky_projection(tau, a), ky_period(a));
}

int ribbon_valley(double ky, double a) {
    return std::abs(ribbon_valley_offset(ky, 1, a)) <= std::abs(ribbon_valley_offset(ky, -1, a)) ? 1 : -1;
}

std::vector<ZeroCrossing> zero_crossings(const RibbonSpectrum& spectrum) {
    const std::size_t n = spectrum.ky.size();
    std::vector<ZeroCrossing> out;
    if (n < 2) return out;
    auto negatives = [&](std::size_t i) {
        const auto& w = spectrum.eigenvalues[i];
        return static_cast<int>(std::count_if(w.begin(), w.end(), [](double x) { return x < 0.0; }));
    };
    const double step = ky_period(spectrum.a) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const int change = negatives(i) - negatives(j);
        if (change == 0) continue;
        const double ky = spectrum.ky[i] + 0.5 * step;
        const int dir = change > 0 ? 1 : -1;
        for (int c = 0; c < std::abs(change); ++c) out.push_back({ky, dir, ribbon_valley(ky, spectrum.a)});
    }
    return out;
}

double edge_dispersion_fit(const RibbonSpectrum& spectrum, int tau, double window_fraction) {
    if (tau != 1 && tau != -1) throw std::invalid_argument("valley index must be +1 or -1");
    const double window = window_fraction * spectrum.gap_edge;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (const auto& mode : spectrum.in_gap_modes) {
        const double ky = spectrum.ky[mode.ky_index];
        if (std::abs(mode.omega) > window || ribbon_valley(ky, spectrum.a) != tau) continue;
        const double q = ribbon_valley_offset(ky, tau, spectrum.a);
        sx += q;
        sy += mode.omega;
        sxx += q * q;
        sxy += q * mode.omega;
        ++count;
    }
    const double denom = count * sxx - sx * sx;
    if (count < 2 || denom <= 0.0) {
        std::ostringstream msg;
        msg << "no in-gap edge branch near valley " << tau << " (gapless or topologically trivial ribbon)";
        throw DomainError(msg.str());
    }
    return (count * sxy - sx * sy) / denom;
}

EnvelopeParams envelope_params(double delta0, double lambda, double v, int nx, double a) {
    if (!(delta0 > 0.0)) throw DomainError("envelope: Delta0 must be positive");
    if (!(lambda > 0.0) || !(v > 0.0) || !(a > 0.0)) throw ConfigError("envelope: lambda, v and a must be positive");
    if (nx < 1) throw ConfigError("envelope: nx must be positive");
    EnvelopeParams p;
    p.delta0 = delta0;
    p.lambda = lambda;
    p.v = v;
    p.a = a;
    p.nx = nx;
    p.xi = v / delta0;
    p.beta_profile = lambda / p.xi;
    p.beta_norm = 2.0 * p.beta_profile;
    const double b = p.beta_profile;
    p.continuum_prefactor = std::sqrt(std::exp(std::lgamma(b + 0.5) - std::lgamma(b)) / (lambda * std::sqrt(pi)));
    double sum = 0.0;
    const int n_min = -(nx / 2);
    for (int n = n_min; n < n_min + nx; ++n) sum += std::pow(std::cosh(1.5 * n * a / lambda), -p.beta_norm);
    p.A = 1.0 / std::sqrt(sum);
    return p;
}

EnvelopeParams envelope_params(const HoneycombSpec& spec) {
    const auto* w = spec.detuning.domain_wall();
    if (!w) throw ConfigError("envelope: lattice has no domain wall");
    return envelope_params(std::abs(w->delta0), w->lambda, dirac_speed(spec.a, spec.J), spec.n1, spec.a);
}

double envelope_continuum(double x, const EnvelopeParams& p) {
    return p.continuum_prefactor * std::pow(std::cosh(x / p.lambda), -p.beta_profile);
}

double envelope_discrete(double x, const EnvelopeParams& p) {
    return p.A * std::pow(std::cosh(x / p.lambda), -p.beta_profile);
}

std::vector<double> envelope_discrete_columns(const EnvelopeParams& p) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(p.nx));
    const int n_min = -(p.nx / 2);
    for (int n = n_min; n < n_min + p.nx; ++n) out.push_back(envelope_discrete(1.5 * n * p.a, p));
    return out;
}

std::vector<double> ribbon_column_profile(const Eigen::VectorXcd& mode) {
    if (mode.size() % 2 != 0) throw std::invalid_argument("ribbon mode must have two entries per column");
    std::vector<double> out(static_cast<std::size_t>(mode.size() / 2));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(2 * i);
        out[i] = (std::abs(mode[k]) + std::abs(mode[k + 1])) / std::sqrt(2.0);
    }
    return out;
}

double envelope_overlap(const Eigen::VectorXcd& mode, const EnvelopeParams& p) {
    const auto numeric = ribbon_column_profile(mode);
    const auto analytic = envelope_discrete_columns(p);
    if (numeric.size() != analytic.size()) throw std::invalid_argument("envelope_overlap: width mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) s += numeric[i] * analytic[i];
    return s * s;
}

double cosh_power_integral(double beta_prime) {
    if (!(beta_prime > 0.0)) throw std::invalid_argument("cosh_power_integral: exponent must be positive");
    return 0.5 * std::sqrt(pi) * std::exp(std::lgamma(0.5 * beta_prime) - std::lgamma(0.5 * (beta_prime + 1.0)));
}

ZeroModeProfile zero_mode_ode_oracle(const std::function<double(double)>& delta, double v, int tau, double x_max,
                                     double step) {
    if (tau != 1 && tau != -1) throw std::invalid_argument("valley index must be +1 or -1");
    if (!(v > 0.0) || !(x_max > 0.0) || !(step > 0.0)) {
        throw std::invalid_argument("zero_mode_ode_oracle: v, x_max and step must be positive");
    }
    using State = std::array<double, 4>;  // Re/Im psi_a, Re/Im psi_b
    const double t = tau;
    auto rhs = [&](const State& s, State& ds, double x) {
        const double k = t * delta(x) / v;
        // psi_a' = i k psi_b, psi_b' = -i k psi_a
        ds[0] = -k * s[3];
        ds[1] = k * s[2];
        ds[2] = k * s[1];
        ds[3] = -k * s[0];
    };

    // Even number of fine steps per side so the coarse run shares every other point.
    const long half_steps = std::max(1L, std::lround(x_max / (2.0 * step)));
    const long n_side = 2 * half_steps;
    const double h = x_max / static_cast<double>(n_side);

    auto integrate_side = [&](double dx, long steps) {
        std::vector<State> out;
        out.reserve(static_cast<std::size_t>(steps + 1));
        State s{1.0, 0.0, 0.0, t};
        boost::numeric::odeint::runge_kutta4<State> stepper;
        boost::numeric::odeint::integrate_n_steps(stepper, rhs, s, 0.0, dx, static_cast<std::size_t>(steps),
                                                  [&](const State& st, double) { out.push_back(st); });
        return out;
    };

    const auto fwd = integrate_side(h, n_side);
    const auto bwd = integrate_side(-h, n_side);
    const auto fwd2 = integrate_side(2.0 * h, half_steps);
    const auto bwd2 = integrate_side(-2.0 * h, half_steps);

    double max_amp = 0.0;
    double max_diff = 0.0;
    for (long i = 0; i <= n_side; ++i) {
        for (const auto* side : {&fwd, &bwd}) {
            const auto& s = (*side)[static_cast<std::size_t>(i)];
            max_amp = std::max(max_amp, std::hypot(s[0], s[1], std::hypot(s[2], s[3])));
        }
    }
    for (long i = 0; i <= half_steps; ++i) {
        const auto k = static_cast<std::size_t>(i);
        for (int c = 0; c < 4; ++c) {
            max_diff = std::max(max_diff, std::abs(fwd[2 * k][c] - fwd2[k][c]));
            max_diff = std::max(max_diff, std::abs(bwd[2 * k][c] - bwd2[k][c]));
        }
    }
    const double rel = max_diff / max_amp;
    if (rel > 1e-4) {
        std::ostringstream msg;
        msg << "zero-mode integration too coarse: step-doubling difference " << rel << " (relative) at step " << h;
        throw NumericalError(msg.str());
    }

    ZeroModeProfile prof;
    prof.tau = tau;
    prof.step = h;
    prof.estimated_error = rel;
    const auto total = static_cast<std::size_t>(2 * n_side + 1);
    prof.x.reserve(total);
    prof.psi_a.reserve(total);
    prof.psi_b.reserve(total);
    auto push = [&](double x, const State& s) {
        prof.x.push_back(x);
        prof.psi_a.emplace_back(s[0], s[1]);
        prof.psi_b.emplace_back(s[2], s[3]);
    };
    for (long i = n_side; i >= 1; --i) push(-h * static_cast<double>(i), bwd[static_cast<std::size_t>(i)]);
    for (long i = 0; i <= n_side; ++i) push(h * static_cast<double>(i), fwd[static_cast<std::size_t>(i)]);

    // Trapezoid rule; the integrand decays at both ends.
    double norm2 = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        const double w = (i == 0 || i + 1 == total) ? 0.5 : 1.0;
        norm2 += w * h * (std::norm(prof.psi_a[i]) + std::norm(prof.psi_b[i]));
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < total; ++i) {
        prof.psi_a[i] *= scale;
        prof.psi_b[i] *= scale;
    }
    return prof;
}

double local_dos_edge(double x, const EnvelopeParams& p) {
    const double psi = envelope_discrete(x, p);
    return sqrt3 * p.a / (4.0 * pi * p.v) * psi * psi;
}

NormalDecayRate decay_rate_normal(double x_R, double g, const EnvelopeParams& p, double omega0) {
    if (std::abs(omega0) >= p.delta0) {
        std::ostringstream msg;
        msg << "edge-mode decay rate needs |omega0| < Delta0 (omega0 = " << omega0 << ", Delta0 = " << p.delta0 << ")";
        throw DomainError(msg.str());
    }
    NormalDecayRate r;
    r.per_valley = 2.0 * pi * g * g * local_dos_edge(x_R, p);
    r.total = 2.0 * r.per_valley;
    return r;
}

GiantDecayRates decay_rate_giant(const GiantAtomSpec& atom, const EnvelopeParams& p) {
    const auto& pts = atom.points();
    const Vec2 r1 = cell_vector(pts.front().n, pts.front().m, p.a);
    const double per_valley = decay_rate_normal(r1.x(), atom.g(), p, atom.omega0()).per_valley;
    GiantDecayRates out;
    for (int tau : {1, -1}) {
        const Vec2 k = dirac_point(tau, p.a);
        cplx sum = 0.0;
        for (const auto& pt : pts) sum += std::polar(1.0, k.dot(cell_vector(pt.n, pt.m, p.a)) - pt.phase);
        const double rate = std::norm(sum) / static_cast<double>(pts.size()) * per_valley;
        (tau == 1 ? out.plus : out.minus) = rate;
    }
    double spread = 0.0;
    for (const auto& pt : pts) spread = std::max(spread, std::abs(cell_vector(pt.n, pt.m, p.a).x() - r1.x()));
    if (spread > 0.5 * p.xi) {
        std::ostringstream msg;
        msg << "coupling points spread " << spread << " across the wall, comparable to the edge-mode width xi = "
            << p.xi << "; the envelope is not constant over the atom";
        out.footprint_warning = msg.str();
    }
    return out;
}

}  // namespace vq
