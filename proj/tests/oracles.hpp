#pragma once

// Reference implementations used only by the tests. Each one derives its
// answer by a route that shares no code with the library beyond the
// HoneycombSpec / GiantAtomSpec data types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "valleyqed/emitter.hpp"
#include "valleyqed/lattice.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
inline const double sqrt3 = std::sqrt(3.0);

struct Site {
    int n, m, sub;
    double x, y;
};

// Enumerates sites in (n, m, sublattice) lexicographic order with positions
// computed from the primitive vectors written out by hand.
inline std::vector<Site> sites(const vq::HoneycombSpec& s) {
    std::vector<Site> out;
    const int n0 = -(s.n1 / 2), m0 = -(s.ny / 2);
    for (int n = n0; n < n0 + s.n1; ++n) {
        for (int m = m0; m < m0 + s.ny; ++m) {
            const double x = 1.5 * s.a * n;
            const double y = 0.5 * sqrt3 * s.a * n + sqrt3 * s.a * m;
            out.push_back({n, m, 0, x, y});
            out.push_back({n, m, 1, x + s.a, y});
        }
    }
    return out;
}

inline double detuning(const vq::HoneycombSpec& s, double x_cell, double y_cell) {
    if (const auto* w = s.detuning.domain_wall()) {
        return w->delta0 * std::tanh((x_cell * w->direction.x() + y_cell * w->direction.y()) / w->lambda);
    }
    return s.detuning.uniform()->delta;
}

// Dense lattice Hamiltonian from geometry: every A-B pair at distance a is
// linked by J (periodic images tried along periodic axes).
inline Eigen::MatrixXcd dense_lattice(const vq::HoneycombSpec& s) {
    const auto st = sites(s);
    const auto N = static_cast<Eigen::Index>(st.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(N, N);
    const double L1x = 1.5 * s.a * s.n1, L1y = 0.5 * sqrt3 * s.a * s.n1;
    const double L2y = sqrt3 * s.a * s.ny;
    for (Eigen::Index i = 0; i < N; ++i) {
        const auto& p = st[static_cast<std::size_t>(i)];
        const double xc = 1.5 * s.a * p.n, yc = 0.5 * sqrt3 * s.a * p.n + sqrt3 * s.a * p.m;
        h(i, i) = (p.sub == 0 ? 1.0 : -1.0) * detuning(s, xc, yc);
    }
    const int r1 = s.boundary_e1 == vq::Boundary::Periodic ? 1 : 0;
    const int r2 = s.boundary_e2 == vq::Boundary::Periodic ? 1 : 0;
    for (Eigen::Index i = 0; i < N; ++i) {
        const auto& p = st[static_cast<std::size_t>(i)];
        if (p.sub != 0) continue;
        for (Eigen::Index j = 0; j < N; ++j) {
            const auto& q = st[static_cast<std::size_t>(j)];
            if (q.sub != 1) continue;
            for (int u = -r1; u <= r1; ++u) {
                for (int v = -r2; v <= r2; ++v) {
                    const double dx = q.x + u * L1x - p.x;
                    const double dy = q.y + u * L1y + v * L2y - p.y;
                    if (std::abs(std::hypot(dx, dy) - s.a) < 1e-9 * s.a) {
                        h(i, j) += s.J;
                        h(j, i) += s.J;
                    }
                }
            }
        }
    }
    return h;
}

// Appends the emitter as the last basis state.
inline Eigen::MatrixXcd dense_total(const vq::HoneycombSpec& s, const vq::GiantAtomSpec& atom) {
    const Eigen::MatrixXcd lat = dense_lattice(s);
    const auto N = lat.rows();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    h.topLeftCorner(N, N) = lat;
    h(N, N) = atom.omega0();
    const auto st = sites(s);
    const double gl = atom.g() / std::sqrt(static_cast<double>(atom.size()));
    for (const auto& c : atom.points()) {
        for (Eigen::Index i = 0; i < N; ++i) {
            const auto& p = st[static_cast<std::size_t>(i)];
            if (p.n == c.n && p.m == c.m && p.sub == 0) {
                h(i, N) += std::polar(gl, c.phase);
                h(N, i) += std::polar(gl, -c.phase);
            }
        }
    }
    return h;
}

// exp(-i H t) psi by full diagonalization.
inline Eigen::VectorXcd dense_evolve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd c = es.eigenvectors().adjoint() * psi;
    Eigen::VectorXcd phased(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) phased[k] = std::polar(1.0, -es.eigenvalues()[k] * t) * c[k];
    return es.eigenvectors() * phased;
}

// Band energies of a periodic uniform lattice on its allowed momenta, using
// the three nearest-neighbour bond vectors directly.
inline std::vector<double> bloch_spectrum(const vq::HoneycombSpec& s) {
    const double delta = s.detuning.uniform()->delta;
    const double a = s.a;
    // Reciprocal vectors solved from b_i . e_j = 2 pi delta_ij.
    Eigen::Matrix2d E;
    E << 1.5 * a, 0.5 * sqrt3 * a, 0.0, sqrt3 * a;  // rows e1, e2
    const Eigen::Matrix2d B = 2.0 * pi * E.inverse().transpose();
    const Eigen::Vector2d d[3] = {{a, 0.0}, {-0.5 * a, 0.5 * sqrt3 * a}, {-0.5 * a, -0.5 * sqrt3 * a}};
    std::vector<double> out;
    for (int i = 0; i < s.n1; ++i) {
        for (int j = 0; j < s.ny; ++j) {
            const Eigen::Vector2d k = (double(i) / s.n1) * B.row(0).transpose() + (double(j) / s.ny) * B.row(1).transpose();
            cplx f = 0.0;
            for (const auto& dj : d) f += std::polar(1.0, k.dot(dj));
            const double w = std::sqrt(delta * delta + s.J * s.J * std::norm(f));
            out.push_back(w);
            out.push_back(-w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// |sum_l exp(i (tau K . R_l - phi_l))|^2 with K = (2 pi/3a, -2 pi/(3 sqrt3 a)).
inline double interference(const vq::GiantAtomSpec& atom, int tau, double a = 1.0) {
    const double Kx = 2.0 * pi / (3.0 * a), Ky = -2.0 * pi / (3.0 * sqrt3 * a);
    cplx s = 0.0;
    for (const auto& p : atom.points()) {
        const double x = 1.5 * a * p.n, y = 0.5 * sqrt3 * a * p.n + sqrt3 * a * p.m;
        s += std::polar(1.0, tau * (Kx * x + Ky * y) - p.phase);
    }
    return std::norm(s);
}

// Deterministic generator for property tests (SplitMix64).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * (next() >> 11) * 0x1.0p-53; }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
    std::uint64_t state_;
};

}  // namespace oracle
