#pragma once

#include <array>
#include <cstddef>
#include <variant>

#include <Eigen/Core>

#include "valleyqed/sparse.hpp"

namespace vq {

using Vec2 = Eigen::Vector2d;

// Honeycomb lattice: A site of cell (n, m) sits at R = n e1 + m e2,
// the B site of the same cell at R + (a, 0).
// e1 = (3a/2, sqrt(3) a/2), e2 = (0, sqrt(3) a), a = nearest-neighbour distance.
Vec2 primitive_e1(double a = 1.0);
Vec2 primitive_e2(double a = 1.0);
// Reciprocal vectors with b_i . e_j = 2 pi delta_ij.
Vec2 reciprocal_b1(double a = 1.0);
Vec2 reciprocal_b2(double a = 1.0);

struct UniformDetuning {
    double delta = 0.0;
};

// delta0 * tanh((R . direction) / lambda)
struct DomainWallDetuning {
    double delta0 = 0.0;
    double lambda = 1.0;
    Vec2 direction = Vec2(1.0, 0.0);
};

class DetuningProfile {
public:
    DetuningProfile() = default;
    DetuningProfile(UniformDetuning u) : value_(u) {}
    DetuningProfile(DomainWallDetuning w) : value_(w) {}

    double at(const Vec2& cell_vector) const;
    bool is_uniform() const { return std::holds_alternative<UniformDetuning>(value_); }
    const UniformDetuning* uniform() const { return std::get_if<UniformDetuning>(&value_); }
    const DomainWallDetuning* domain_wall() const { return std::get_if<DomainWallDetuning>(&value_); }
    // Throws ConfigError on lambda <= 0 or non-unit direction.
    void validate() const;

private:
    std::variant<UniformDetuning, DomainWallDetuning> value_;
};

enum class Boundary { Periodic, Open };
enum class Sublattice { A = 0, B = 1 };

struct HoneycombSpec {
    int n1 = 2;
    int ny = 2;
    double a = 1.0;
    double J = 1.0;
    DetuningProfile detuning;
    Boundary boundary_e1 = Boundary::Periodic;
    Boundary boundary_e2 = Boundary::Periodic;

    // Cell indices run n = -n1/2 .. n1/2-1 for even n1 and -(n1-1)/2 .. (n1-1)/2
    // for odd n1; likewise for m.
    int n_min() const { return -(n1 / 2); }
    int n_max() const { return n_min() + n1 - 1; }
    int m_min() const { return -(ny / 2); }
    int m_max() const { return m_min() + ny - 1; }
    std::size_t cell_count() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(ny); }
    std::size_t site_count() const { return 2 * cell_count(); }
    bool contains_cell(int n, int m) const {
        return n >= n_min() && n <= n_max() && m >= m_min() && m <= m_max();
    }

    void validate() const;
};

struct SiteIndex {
    int n = 0;
    int m = 0;
    Sublattice sublattice = Sublattice::A;
    bool operator==(const SiteIndex&) const = default;
};

// Bijection SiteIndex <-> [0, 2 n1 ny). Throws std::out_of_range.
std::size_t flatten(const HoneycombSpec& spec, const SiteIndex& s);
SiteIndex unflatten(const HoneycombSpec& spec, std::size_t index);

Vec2 cell_vector(int n, int m, double a = 1.0);
Vec2 site_position(const HoneycombSpec& spec, const SiteIndex& s);

// Real-space single-excitation Hamiltonian of the bare lattice:
// +Delta(R) on A, -Delta(R) on B, J between A(R) and B(R), B(R-e1), B(R-e1+e2).
SparseHermitian build_lattice_hamiltonian(const HoneycombSpec& spec);

}  // namespace vq
