#include "valleyqed/emitter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "valleyqed/bloch.hpp"
#include "valleyqed/errors.hpp"

namespace vq {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
const cplx I{0.0, 1.0};

void check_tau(int tau) {
    if (tau != 1 && tau != -1) throw std::invalid_argument("valley index must be +1 or -1");
}
}  // namespace

double wrap_phase(double phase) {
    double r = std::fmod(phase, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

GiantAtomSpec::GiantAtomSpec(double omega0, double g, std::vector<CouplingPoint> points)
    : omega0_(omega0), g_(g), points_(std::move(points)) {
    if (points_.empty()) throw ConfigError("atom: at least one coupling point is required");
    if (!std::isfinite(omega0_) || !std::isfinite(g_)) throw ConfigError("atom: omega0 and g must be finite");
    for (auto& p : points_) p.phase = wrap_phase(p.phase);
}

double GiantAtomSpec::point_coupling() const { return g_ / std::sqrt(static_cast<double>(points_.size())); }

std::optional<std::string> GiantAtomSpec::weak_coupling_warning(double J) const {
    const double ratio = std::abs(g_ / J);
    if (ratio < 0.5) return std::nullopt;
    std::ostringstream msg;
    msg << "g/J = " << ratio << " is outside the weak-coupling regime (valley selectivity requires g/J << 3/2)";
    return msg.str();
}

ModeCouplings mode_couplings(const GiantAtomSpec& atom, const Vec2& k, double delta, double J, double a,
                             std::size_t cell_count) {
    if (cell_count == 0) throw std::invalid_argument("mode_couplings: cell_count must be positive");
    cplx phasor_sum = 0.0;
    for (const auto& p : atom.points()) {
        phasor_sum += std::exp(I * (p.phase - k.dot(cell_vector(p.n, p.m, a))));
    }
    const double prefactor = atom.g() / std::sqrt(static_cast<double>(cell_count) * atom.size());
    const auto angles = bloch_angles(k, delta, J, a);
    const double c = std::cos(angles.theta / 2.0);
    const double s = std::sin(angles.theta / 2.0);

    ModeCouplings out;
    out.g_plus = prefactor * phasor_sum * c;
    out.g_minus = -prefactor * phasor_sum * std::exp(I * angles.varphi) * s;
    out.gauge_valid = angles.varphi_valid || s == 0.0;
    return out;
}

cplx structure_factor(const GiantAtomSpec& atom, int tau, const Vec2& q, double a) {
    check_tau(tau);
    const Vec2 k = dirac_point(tau, a) + q;
    cplx sum = 0.0;
    for (const auto& p : atom.points()) sum += std::exp(I * (p.phase - k.dot(cell_vector(p.n, p.m, a))));
    return sum;
}

ValleySelectivityReport check_valley_selective(const GiantAtomSpec& atom, int tau, double a, double tol,
                                               double size_bound) {
    check_tau(tau);
    if (tol < 0.0) tol = 1e-9 * static_cast<double>(atom.size());
    if (size_bound < 0.0) size_bound = 3.0 * a;

    const auto& pts = atom.points();
    const Vec2 r1 = cell_vector(pts.front().n, pts.front().m, a);
    auto phasor_sum = [&](int t) {
        const Vec2 K = dirac_point(t, a);
        cplx sum = 0.0;
        for (const auto& p : pts) sum += std::exp(I * (p.phase - K.dot(cell_vector(p.n, p.m, a) - r1)));
        return std::abs(sum);
    };

    ValleySelectivityReport r;
    r.modulus_tau = phasor_sum(tau);
    r.modulus_minus_tau = phasor_sum(-tau);
    for (const auto& p : pts) r.max_separation = std::max(r.max_separation, (cell_vector(p.n, p.m, a) - r1).norm());
    r.couples_to_tau = r.modulus_tau > tol;
    r.decoupled_from_minus_tau = r.modulus_minus_tau <= tol;
    r.size_ok = r.max_separation <= size_bound;
    return r;
}

std::optional<double> solve_phase_two_points(int delta_n, int delta_m, int tau) {
    check_tau(tau);
    const int diff = delta_n - delta_m;
    if (diff % 3 == 0) return std::nullopt;
    // phi = [1 - (2 tau / 3)(dn - dm)] pi; reduce the rational multiple of pi
    // exactly before converting, so the result is the nearest double to k pi / 3.
    int thirds = 3 - 2 * tau * diff;  // phi = thirds * pi / 3
    thirds %= 6;
    if (thirds < 0) thirds += 6;
    return thirds * std::numbers::pi / 3.0;
}

}  // namespace vq
