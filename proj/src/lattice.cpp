#include "valleyqed/lattice.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "valleyqed/errors.hpp"

namespace vq {

namespace {

constexpr double sqrt3 = std::numbers::sqrt3;

// Maps a cell index into range along one axis, or nullopt for an open edge.
std::optional<int> wrap(int index, int lo, int count, Boundary boundary) {
    int offset = index - lo;
    if (offset >= 0 && offset < count) return index;
    if (boundary == Boundary::Open) return std::nullopt;
    offset %= count;
    if (offset < 0) offset += count;
    return lo + offset;
}

}  // namespace

Vec2 primitive_e1(double a) { return {1.5 * a, 0.5 * sqrt3 * a}; }
Vec2 primitive_e2(double a) { return {0.0, sqrt3 * a}; }
Vec2 reciprocal_b1(double a) { return {4.0 * std::numbers::pi / (3.0 * a), 0.0}; }
Vec2 reciprocal_b2(double a) { return {-2.0 * std::numbers::pi / (3.0 * a), 2.0 * std::numbers::pi / (sqrt3 * a)}; }

double DetuningProfile::at(const Vec2& cell_vector) const {
    if (const auto* u = uniform()) return u->delta;
    const auto& w = std::get<DomainWallDetuning>(value_);
    return w.delta0 * std::tanh(cell_vector.dot(w.direction) / w.lambda);
}

void DetuningProfile::validate() const {
    if (const auto* w = domain_wall()) {
        if (!(w->lambda > 0.0)) throw ConfigError("domain wall: lambda must be positive");
        if (std::abs(w->direction.norm() - 1.0) > 1e-12) {
            throw ConfigError("domain wall: direction must be a unit vector");
        }
    }
}

void HoneycombSpec::validate() const {
    if (n1 < 2 || ny < 2) throw ConfigError("lattice: n1 and ny must be >= 2");
    if (!(a > 0.0)) throw ConfigError("lattice: a must be positive");
    if (!std::isfinite(J)) throw ConfigError("lattice: J must be finite");
    detuning.validate();
}

std::size_t flatten(const HoneycombSpec& spec, const SiteIndex& s) {
    if (!spec.contains_cell(s.n, s.m)) {
        throw std::out_of_range("site (" + std::to_string(s.n) + ", " + std::to_string(s.m) +
                                ") outside lattice");
    }
    const auto row = static_cast<std::size_t>(s.n - spec.n_min());
    const auto col = static_cast<std::size_t>(s.m - spec.m_min());
    return 2 * (row * static_cast<std::size_t>(spec.ny) + col) + static_cast<std::size_t>(s.sublattice);
}

SiteIndex unflatten(const HoneycombSpec& spec, std::size_t index) {
    if (index >= spec.site_count()) throw std::out_of_range("site index out of range");
    const std::size_t cell = index / 2;
    SiteIndex s;
    s.sublattice = (index % 2 == 0) ? Sublattice::A : Sublattice::B;
    s.n = static_cast<int>(cell / static_cast<std::size_t>(spec.ny)) + spec.n_min();
    s.m = static_cast<int>(cell % static_cast<std::size_t>(spec.ny)) + spec.m_min();
    return s;
}

Vec2 cell_vector(int n, int m, double a) { return n * primitive_e1(a) + m * primitive_e2(a); }

Vec2 site_position(const HoneycombSpec& spec, const SiteIndex& s) {
    if (!spec.contains_cell(s.n, s.m)) throw std::out_of_range("site_position: index outside lattice");
    Vec2 r = cell_vector(s.n, s.m, spec.a);
    if (s.sublattice == Sublattice::B) r.x() += spec.a;
    return r;
}

SparseHermitian build_lattice_hamiltonian(const HoneycombSpec& spec) {
    spec.validate();
    SparseHermitian::Builder builder(spec.site_count());
    // B partners of A(n, m): same cell, n-1, and (n-1, m+1).
    constexpr std::array<std::array<int, 2>, 3> hops{{{0, 0}, {-1, 0}, {-1, 1}}};

    for (int n = spec.n_min(); n <= spec.n_max(); ++n) {
        for (int m = spec.m_min(); m <= spec.m_max(); ++m) {
            const double delta = spec.detuning.at(cell_vector(n, m, spec.a));
            const auto a_site = flatten(spec, {n, m, Sublattice::A});
            const auto b_site = flatten(spec, {n, m, Sublattice::B});
            builder.add_diagonal(a_site, delta);
            builder.add_diagonal(b_site, -delta);
            for (const auto& [dn, dm] : hops) {
                const auto nn = wrap(n + dn, spec.n_min(), spec.n1, spec.boundary_e1);
                const auto mm = wrap(m + dm, spec.m_min(), spec.ny, spec.boundary_e2);
                if (!nn || !mm) continue;
                builder.add_coupling(a_site, flatten(spec, {*nn, *mm, Sublattice::B}), spec.J);
            }
        }
    }
    return builder.build();
}

}  // namespace vq
