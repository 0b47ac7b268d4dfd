#include "valleyqed/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "valleyqed/errors.hpp"

namespace vq {

ChebyshevPropagator::ChebyshevPropagator(const SparseHermitian& h, PropagatorOptions options)
    : h_(h), options_(options) {
    const auto [lo, hi] = h_.gershgorin_bounds();
    centre_ = 0.5 * (hi + lo);
    // Small margin keeps the rescaled spectrum strictly inside [-1, 1].
    half_width_ = 0.5 * (hi - lo) * (1.0 + 1e-6) + 1e-12;
    const std::size_t n = h_.dimension();
    prev_.resize(n);
    curr_.resize(n);
    next_.resize(n);
    acc_.resize(n);
}

const std::vector<cplx>& ChebyshevPropagator::coefficients(double dt) {
    if (dt == cached_dt_ && !cached_coefficients_.empty()) return cached_coefficients_;

    // exp(-i x z) = J0(x) + 2 sum_k (-i)^k Jk(x) Tk(z),  x = r dt.
    const double x = half_width_ * dt;
    std::vector<cplx> coeffs;
    const cplx minus_i{0.0, -1.0};
    cplx phase{1.0, 0.0};
    for (std::size_t k = 0;; ++k) {
        if (k >= options_.max_terms) {
            std::ostringstream msg;
            msg << "Chebyshev propagator did not converge within " << options_.max_terms
                << " terms (half-width " << half_width_ << ", dt " << dt << ", last |c_k| "
                << (coeffs.empty() ? 0.0 : std::abs(coeffs.back())) << ")";
            throw NumericalError(msg.str());
        }
        const double bessel = std::cyl_bessel_j(static_cast<double>(k), std::abs(x));
        // J_k(-x) = (-1)^k J_k(x)
        const double signed_bessel = (x < 0.0 && k % 2 == 1) ? -bessel : bessel;
        coeffs.push_back((k == 0 ? 1.0 : 2.0) * phase * signed_bessel);
        phase *= minus_i;
        // Past the turning point the Bessel tail decays faster than geometrically.
        if (static_cast<double>(k) > std::abs(x) && std::abs(bessel) < 0.1 * options_.tolerance) break;
    }
    cached_dt_ = dt;
    cached_coefficients_ = std::move(coeffs);
    return cached_coefficients_;
}

void ChebyshevPropagator::step(std::span<cplx> psi, double dt) {
    if (psi.size() != h_.dimension()) throw std::invalid_argument("propagator: state dimension mismatch");
    if (dt == 0.0) return;
    const double scaled = std::abs(half_width_ * dt);
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(scaled / options_.max_scaled_step)));
    const double sub_dt = dt / static_cast<double>(pieces);
    for (std::size_t p = 0; p < pieces; ++p) substep(psi, sub_dt);
}

void ChebyshevPropagator::substep(std::span<cplx> psi, double dt) {
    const auto& c = coefficients(dt);
    const std::size_t n = psi.size();
    const double scale = 1.0 / half_width_;
    const auto sn = static_cast<std::ptrdiff_t>(n);

    std::copy(psi.begin(), psi.end(), prev_.begin());
    h_.apply_shifted(prev_, curr_, centre_, scale);
    ++matvecs_;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < sn; ++i) acc_[i] = c[0] * prev_[i] + c[1] * curr_[i];

    for (std::size_t k = 2; k < c.size(); ++k) {
        h_.apply_shifted(curr_, next_, centre_, scale);
        ++matvecs_;
        const cplx ck = c[k];
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < sn; ++i) {
            next_[i] = 2.0 * next_[i] - prev_[i];
            acc_[i] += ck * next_[i];
        }
        std::swap(prev_, curr_);
        std::swap(curr_, next_);
    }

    // Global phase from the spectral shift.
    const cplx shift = std::exp(cplx(0.0, -centre_ * dt));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < sn; ++i) psi[i] = shift * acc_[i];
    last_terms_ = c.size();
}

}  // namespace vq
