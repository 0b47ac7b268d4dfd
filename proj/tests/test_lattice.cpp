#include <doctest.h>

#include <numbers>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "valleyqed/errors.hpp"
#include "valleyqed/lattice.hpp"

using namespace vq;

namespace {

HoneycombSpec uniform_spec(int n1, int ny, double delta, Boundary b = Boundary::Periodic) {
    HoneycombSpec s;
    s.n1 = n1;
    s.ny = ny;
    s.detuning = UniformDetuning{delta};
    s.boundary_e1 = s.boundary_e2 = b;
    return s;
}

double max_abs_diff(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) { return (x - y).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("primitive and reciprocal vectors are dual") {
    const double a = 1.3;
    const Vec2 e[2] = {primitive_e1(a), primitive_e2(a)};
    const Vec2 b[2] = {reciprocal_b1(a), reciprocal_b2(a)};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(b[i].dot(e[j]) == doctest::Approx(i == j ? 2 * std::numbers::pi : 0.0).epsilon(1e-14));
        }
    }
    CHECK(e[0].x() == doctest::Approx(1.5 * a));
    CHECK(e[0].y() == doctest::Approx(std::sqrt(3.0) / 2 * a));
}

TEST_CASE("site positions") {
    HoneycombSpec s = uniform_spec(4, 4, 0.0);
    CHECK(site_position(s, {0, 0, Sublattice::A}).norm() == 0.0);
    const Vec2 p = site_position(s, {1, 0, Sublattice::A});
    CHECK(p.x() == doctest::Approx(1.5));
    CHECK(p.y() == doctest::Approx(0.8660254).epsilon(1e-7));
    const Vec2 q = site_position(s, {0, 0, Sublattice::B});
    CHECK(q.x() == doctest::Approx(1.0));
    CHECK(q.y() == doctest::Approx(0.0));
    CHECK_THROWS_AS(site_position(s, {2, 0, Sublattice::A}), std::out_of_range);
}

TEST_CASE("flatten is a bijection on even and odd lattices") {
    for (auto [n1, ny] : {std::pair{4, 6}, std::pair{5, 3}, std::pair{2, 2}}) {
        HoneycombSpec s = uniform_spec(n1, ny, 0.0);
        std::set<std::size_t> seen;
        for (int n = s.n_min(); n <= s.n_max(); ++n) {
            for (int m = s.m_min(); m <= s.m_max(); ++m) {
                for (auto sub : {Sublattice::A, Sublattice::B}) {
                    const SiteIndex si{n, m, sub};
                    const auto k = flatten(s, si);
                    CHECK(k < s.site_count());
                    CHECK(unflatten(s, k) == si);
                    seen.insert(k);
                }
            }
        }
        CHECK(seen.size() == s.site_count());
        CHECK_THROWS_AS(flatten(s, {s.n_max() + 1, 0, Sublattice::A}), std::out_of_range);
        CHECK_THROWS_AS(unflatten(s, s.site_count()), std::out_of_range);
    }
}

TEST_CASE("odd sizes use a symmetric cell range") {
    HoneycombSpec s = uniform_spec(151, 151, 0.5);
    CHECK(s.n_min() == -75);
    CHECK(s.n_max() == 75);
    HoneycombSpec e = uniform_spec(100, 4, 0.5);
    CHECK(e.n_min() == -50);
    CHECK(e.n_max() == 49);
}

TEST_CASE("spec validation") {
    HoneycombSpec s = uniform_spec(1, 4, 0.0);
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = uniform_spec(4, 4, 0.0);
    s.a = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = uniform_spec(4, 4, 0.0);
    s.detuning = DomainWallDetuning{0.5, 0.0, Vec2(1, 0)};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.detuning = DomainWallDetuning{0.5, 2.0, Vec2(1, 1)};
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.detuning = DomainWallDetuning{0.5, 2.0, Vec2(1, 0)};
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("detuning profile evaluation") {
    DetuningProfile u(UniformDetuning{0.3});
    CHECK(u.at(Vec2(5, -7)) == 0.3);
    DetuningProfile w(DomainWallDetuning{0.5, 2.0, Vec2(1, 0)});
    CHECK(w.at(Vec2(0, 3)) == 0.0);
    CHECK(w.at(Vec2(3, 0)) == doctest::Approx(0.5 * std::tanh(1.5)));
    CHECK(w.at(Vec2(-3, 9)) == doctest::Approx(-0.5 * std::tanh(1.5)));
}

TEST_CASE("lattice Hamiltonian matches the geometric oracle") {
    SUBCASE("periodic uniform") {
        const auto s = uniform_spec(6, 4, 0.3);
        CHECK(max_abs_diff(build_lattice_hamiltonian(s).to_dense(), oracle::dense_lattice(s)) == 0.0);
    }
    SUBCASE("open uniform, odd") {
        const auto s = uniform_spec(5, 7, -0.2, Boundary::Open);
        CHECK(max_abs_diff(build_lattice_hamiltonian(s).to_dense(), oracle::dense_lattice(s)) == 0.0);
    }
    SUBCASE("mixed boundaries with a domain wall") {
        auto s = uniform_spec(8, 6, 0.0);
        s.boundary_e1 = Boundary::Open;
        s.detuning = DomainWallDetuning{0.5, 2.0, Vec2(1, 0)};
        CHECK(max_abs_diff(build_lattice_hamiltonian(s).to_dense(), oracle::dense_lattice(s)) < 1e-15);
    }
}

TEST_CASE("coordination numbers") {
    const auto periodic = build_lattice_hamiltonian(uniform_spec(6, 6, 0.2));
    const auto open = build_lattice_hamiltonian(uniform_spec(6, 6, 0.2, Boundary::Open));
    for (std::size_t r = 0; r < periodic.dimension(); ++r) {
        CHECK(periodic.row_nonzeros(r) == 4);  // diagonal + 3 hops
        CHECK(open.row_nonzeros(r) <= 4);
    }
}

TEST_CASE("uniform lattice: traceless and chiral-symmetric at zero detuning") {
    const auto h = build_lattice_hamiltonian(uniform_spec(4, 4, 0.7));
    CHECK(h.trace() == doctest::Approx(0.0));
    const auto h0 = build_lattice_hamiltonian(uniform_spec(2, 2, 0.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h0.to_dense());
    const auto w = es.eigenvalues();
    for (Eigen::Index i = 0; i < w.size(); ++i) CHECK(w[i] == doctest::Approx(-w[w.size() - 1 - i]).epsilon(1e-12));
}

TEST_CASE("coordinate dump round-trips the entries") {
    const auto h = build_lattice_hamiltonian(uniform_spec(2, 2, 0.25));
    std::ostringstream out;
    h.write_coo(out);
    std::istringstream in(out.str());
    std::size_t r, c, count = 0;
    double re, im;
    while (in >> r >> c >> re >> im) {
        CHECK(h.coefficient(r, c) == cplx(re, im));
        ++count;
    }
    CHECK(count == h.nonzeros());
}
