#include "valleyqed/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "valleyqed/errors.hpp"

namespace vq {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double sqrt3 = std::numbers::sqrt3;
const cplx I{0.0, 1.0};
}  // namespace

cplx f_k(const Vec2& k, double a) {
    return std::exp(I * (k.x() * a)) + 2.0 * std::exp(-I * (k.x() * a / 2.0)) * std::cos(sqrt3 * a * k.y() / 2.0);
}

double band_energy(const Vec2& k, double delta, double J, double a) {
    return std::sqrt(delta * delta + J * J * std::norm(f_k(k, a)));
}

BlochAngles bloch_angles(const Vec2& k, double delta, double J, double a) {
    const cplx f = f_k(k, a);
    const double omega = std::sqrt(delta * delta + J * J * std::norm(f));
    BlochAngles out;
    if (omega == 0.0) {
        // Gapless Dirac point: both angles are gauge.
        out.theta = pi / 2.0;
        out.varphi = 0.0;
        out.varphi_valid = false;
        return out;
    }
    out.theta = std::acos(std::clamp(delta / omega, -1.0, 1.0));
    out.varphi_valid = std::abs(f) > 64.0 * std::numeric_limits<double>::epsilon();
    out.varphi = out.varphi_valid ? std::arg(f) : 0.0;
    return out;
}

BlochPoint bloch_point(const Vec2& k, double delta, double J, double a) {
    BlochPoint p;
    p.k = k;
    p.f = f_k(k, a);
    p.omega = std::sqrt(delta * delta + J * J * std::norm(p.f));
    p.angles = bloch_angles(k, delta, J, a);
    return p;
}

Eigen::Matrix2cd bloch_hamiltonian(const Vec2& k, double delta, double J, double a) {
    const cplx f = f_k(k, a);
    Eigen::Matrix2cd h;
    h << delta, J * f, J * std::conj(f), -delta;
    return h;
}

Vec2 dirac_point(int tau, double a) {
    return static_cast<double>(tau) * Vec2(2.0 * pi / (3.0 * a), -2.0 * pi / (3.0 * sqrt3 * a));
}

double dirac_speed(double a, double J) { return 1.5 * a * J; }

ValleyFrame valley_frame(int tau, double a, double J) {
    if (tau != 1 && tau != -1) throw std::invalid_argument("valley index must be +1 or -1");
    return {tau, dirac_point(tau, a), dirac_speed(a, J)};
}

Eigen::Matrix2cd dirac_expansion(int tau, const Vec2& q, double delta, double v) {
    const double x = v * tau * q.x();
    const double y = v * q.y();
    Eigen::Matrix2cd h;
    h << delta, cplx(x, -y), cplx(x, y), -delta;
    return h;
}

double berry_curvature_analytic(int tau, const Vec2& q, double delta, double v) {
    const double e2 = delta * delta + v * v * q.squaredNorm();
    if (e2 == 0.0) throw DomainError("Berry curvature is singular at Delta = 0, q = 0");
    return tau * v * v * delta / (2.0 * std::pow(e2, 1.5));
}

int nearest_valley(const Vec2& k, double a, double* distance) {
    const Vec2 b1 = reciprocal_b1(a);
    const Vec2 b2 = reciprocal_b2(a);
    // Fractional coordinates along b1, b2.
    const double s = k.dot(primitive_e1(a)) / (2.0 * pi);
    const double t = k.dot(primitive_e2(a)) / (2.0 * pi);
    const Vec2 reduced = k - std::floor(s) * b1 - std::floor(t) * b2;

    double best = std::numeric_limits<double>::infinity();
    int valley = 1;
    for (int tau : {1, -1}) {
        const Vec2 K = dirac_point(tau, a);
        for (int p = -1; p <= 2; ++p) {
            for (int q = -1; q <= 2; ++q) {
                const double d = (reduced - K - p * b1 - q * b2).norm();
                if (d < best) {
                    best = d;
                    valley = tau;
                }
            }
        }
    }
    if (distance) *distance = best;
    return valley;
}

BerryFluxGrid lower_band_berry_flux(double delta, double J, double a, int grid) {
    if (grid < 3) throw std::invalid_argument("Berry flux grid must be >= 3");
    const Vec2 b1 = reciprocal_b1(a);
    const Vec2 b2 = reciprocal_b2(a);
    const int side = grid + 1;

    // Eigenvectors at the exact momenta, edges included: h(k) is not
    // periodic under k -> k + G in this basis, so edges are not identified.
    std::vector<Eigen::Vector2cd> lower(static_cast<std::size_t>(side) * side);
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            const Vec2 k = (static_cast<double>(i) / grid) * b1 + (static_cast<double>(j) / grid) * b2;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(bloch_hamiltonian(k, delta, J, a));
            lower[static_cast<std::size_t>(i) * side + j] = es.eigenvectors().col(0);
        }
    }
    auto u = [&](int i, int j) -> const Eigen::Vector2cd& { return lower[static_cast<std::size_t>(i) * side + j]; };

    BerryFluxGrid out;
    out.grid = grid;
    const double cross = b1.x() * b2.y() - b1.y() * b2.x();
    out.plaquette_area = std::abs(cross) / (static_cast<double>(grid) * grid);
    out.flux.resize(static_cast<std::size_t>(grid) * grid);
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const cplx loop = u(i, j).dot(u(i + 1, j)) * u(i + 1, j).dot(u(i + 1, j + 1)) *
                              u(i + 1, j + 1).dot(u(i, j + 1)) * u(i, j + 1).dot(u(i, j));
            out.flux[static_cast<std::size_t>(i) * grid + j] = std::arg(loop);
        }
    }
    return out;
}

ValleyChern valley_chern_numeric(double delta, double J, double a, int grid) {
    if (delta == 0.0) throw DomainError("valley Chern number undefined for a gapless lattice (Delta = 0)");
    if (grid < 48) throw std::invalid_argument("valley Chern grid must be >= 48");
    const auto flux = lower_band_berry_flux(delta, J, a, grid);
    const Vec2 b1 = reciprocal_b1(a);
    const Vec2 b2 = reciprocal_b2(a);

    ValleyChern c;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const Vec2 centre = ((i + 0.5) / grid) * b1 + ((j + 0.5) / grid) * b2;
            const double phase = flux.at(i, j) / (2.0 * pi);
            if (nearest_valley(centre, a) == 1) {
                c.c_plus += phase;
            } else {
                c.c_minus += phase;
            }
        }
    }
    c.total = c.c_plus + c.c_minus;
    return c;
}

double valley_chern_numeric(double delta, double J, double a, int tau, int grid) {
    if (tau != 1 && tau != -1) throw std::invalid_argument("valley index must be +1 or -1");
    const auto c = valley_chern_numeric(delta, J, a, grid);
    return tau == 1 ? c.c_plus : c.c_minus;
}

}  // namespace vq
