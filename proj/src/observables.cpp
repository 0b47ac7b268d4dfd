#include "valleyqed/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "valleyqed/bloch.hpp"
#include "valleyqed/errors.hpp"

namespace vq {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// out(i, j) = sum_{r, c} exp(-2 pi i (i r / rows + j c / cols)) in(r, c), row-major.
// Index offsets (cell indices start at n_min, m_min) are applied by the caller.
std::vector<cplx> dft2(const std::vector<cplx>& in, int rows, int cols) {
    auto twiddles = [](int size) {
        std::vector<cplx> w(static_cast<std::size_t>(size));
        for (int k = 0; k < size; ++k) w[k] = std::polar(1.0, -two_pi * k / size);
        return w;
    };
    const auto wr = twiddles(rows);
    const auto wc = twiddles(cols);

    std::vector<cplx> tmp(in.size());
    for (int r = 0; r < rows; ++r) {
        for (int j = 0; j < cols; ++j) {
            cplx acc = 0.0;
            for (int c = 0; c < cols; ++c) acc += wc[static_cast<std::size_t>((static_cast<long>(j) * c) % cols)] * in[r * cols + c];
            tmp[r * cols + j] = acc;
        }
    }
    std::vector<cplx> out(in.size());
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            cplx acc = 0.0;
            for (int r = 0; r < rows; ++r) acc += wr[static_cast<std::size_t>((static_cast<long>(i) * r) % rows)] * tmp[r * cols + j];
            out[i * cols + j] = acc;
        }
    }
    return out;
}

Vec2 fold_to_first_zone(const Vec2& k, double a) {
    const Vec2 b1 = reciprocal_b1(a);
    const Vec2 b2 = reciprocal_b2(a);
    Vec2 best = k;
    for (int p = -2; p <= 2; ++p) {
        for (int q = -2; q <= 2; ++q) {
            const Vec2 c = k + p * b1 + q * b2;
            if (c.squaredNorm() < best.squaredNorm() - 1e-12) best = c;
        }
    }
    return best;
}

}  // namespace

double MomentumDensity::max() const { return rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end()); }

double MomentumDensity::total() const {
    double t = 0.0;
    for (double r : rho) t += r;
    return t;
}

MomentumDensity momentum_density(const ExcitationState& state, const HoneycombSpec& spec) {
    if (state.field.size() != spec.site_count()) throw std::invalid_argument("momentum_density: state does not match lattice");
    const int rows = spec.n1;
    const int cols = spec.ny;
    const auto cells = spec.cell_count();
    std::vector<cplx> a_amp(cells), b_amp(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        a_amp[c] = state.field[2 * c];
        b_amp[c] = state.field[2 * c + 1];
    }
    const auto a_k = dft2(a_amp, rows, cols);
    const auto b_k = dft2(b_amp, rows, cols);

    MomentumDensity d;
    d.n1 = rows;
    d.ny = cols;
    d.a = spec.a;
    d.k.reserve(cells);
    d.k_folded.reserve(cells);
    d.rho.reserve(cells);
    const Vec2 b1 = reciprocal_b1(spec.a);
    const Vec2 b2 = reciprocal_b2(spec.a);
    const double inv_n = 1.0 / static_cast<double>(cells);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const Vec2 k = (static_cast<double>(i) / rows) * b1 + (static_cast<double>(j) / cols) * b2;
            // The cell-index offset only multiplies both sublattices by a common phase.
            const auto idx = static_cast<std::size_t>(i) * cols + j;
            d.k.push_back(k);
            d.k_folded.push_back(fold_to_first_zone(k, spec.a));
            d.rho.push_back((std::norm(a_k[idx]) + std::norm(b_k[idx])) * inv_n);
        }
    }
    return d;
}

double ValleyIntensities::polarization() const {
    const double s = I_K + I_Kp;
    return s > 0.0 ? (I_K - I_Kp) / s : 0.0;
}

double ValleyIntensities::selectivity() const { return std::abs(polarization()); }

double ValleyIntensities::suppression_ratio() const {
    const double hi = std::max(I_K, I_Kp);
    return hi > 0.0 ? std::min(I_K, I_Kp) / hi : 0.0;
}

ValleyIntensities valley_intensities(const MomentumDensity& density, double q_cut) {
    const double k_norm = dirac_point(1, density.a).norm();
    if (q_cut < 0.0) q_cut = 0.25 * k_norm;
    // Adjacent zone corners are |K| apart.
    if (2.0 * q_cut >= k_norm) {
        std::ostringstream msg;
        msg << "valley disk radius " << q_cut << " makes disks around adjacent zone corners overlap (|K| = " << k_norm
            << ")";
        throw ConfigError(msg.str());
    }
    ValleyIntensities out;
    for (std::size_t i = 0; i < density.k.size(); ++i) {
        double dist = 0.0;
        const int tau = nearest_valley(density.k[i], density.a, &dist);
        if (dist >= q_cut) continue;
        (tau == 1 ? out.I_K : out.I_Kp) += density.rho[i];
    }
    return out;
}

DecayFit fit_decay_rate(const EmissionTrajectory& trajectory, double upper, double lower) {
    const auto& t = trajectory.times;
    const auto& p = trajectory.populations;
    if (p.empty() || *std::min_element(p.begin(), p.end()) > lower) {
        throw FitWindowError("decay fit: population never falls below the lower fit bound");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    std::vector<std::pair<double, double>> window;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > upper || p[i] < lower || p[i] <= 0.0) continue;
        const double y = std::log(p[i]);
        window.emplace_back(t[i], y);
        sx += t[i];
        sy += y;
        sxx += t[i] * t[i];
        sxy += t[i] * y;
        ++n;
    }
    if (n < 3) throw FitWindowError("decay fit: fewer than three samples inside the fit window");
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (denom <= 0.0) throw FitWindowError("decay fit: degenerate time samples");
    const double slope = (dn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / dn;

    const double mean = sy / dn;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& [x, y] : window) {
        const double r = y - (intercept + slope * x);
        ss_res += r * r;
        ss_tot += (y - mean) * (y - mean);
    }
    DecayFit fit;
    fit.gamma = -slope;
    fit.intercept = intercept;
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points = n;
    return fit;
}

double chirality(const ExcitationState& state, const HoneycombSpec& spec, double y_exclusion) {
    if (state.field.size() != spec.site_count()) throw std::invalid_argument("chirality: state does not match lattice");
    if (y_exclusion < 0.0) y_exclusion = 5.0 * spec.a;
    double down = 0.0;
    double outside = 0.0;
    for (std::size_t i = 0; i < state.field.size(); ++i) {
        const double y = site_position(spec, unflatten(spec, i)).y();
        if (std::abs(y) <= y_exclusion) continue;
        const double w = std::norm(state.field[i]);
        outside += w;
        if (y < 0.0) down += w;
    }
    if (!(outside > 0.0)) throw NumericalError("chirality undefined: no photon weight outside the exclusion zone");
    return down / outside;
}

std::vector<SiteDensity> real_space_density(const ExcitationState& state, const HoneycombSpec& spec) {
    std::vector<SiteDensity> out;
    out.reserve(state.field.size());
    for (std::size_t i = 0; i < state.field.size(); ++i) {
        const auto s = unflatten(spec, i);
        out.push_back({site_position(spec, s), s.sublattice, std::norm(state.field[i])});
    }
    return out;
}

}  // namespace vq
