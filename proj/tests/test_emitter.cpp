#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "valleyqed/bloch.hpp"
#include "valleyqed/emitter.hpp"
#include "valleyqed/errors.hpp"

using namespace vq;
constexpr double pi = std::numbers::pi;

TEST_CASE("atom spec construction") {
    const GiantAtomSpec atom(0.7, 0.3, {{0, 0, -pi / 3}, {1, 2, 7.0}});
    CHECK(atom.points()[0].phase == doctest::Approx(5 * pi / 3));
    CHECK(atom.points()[1].phase == doctest::Approx(7.0 - 2 * pi));
    CHECK(atom.point_coupling() == doctest::Approx(0.3 / std::sqrt(2.0)));
    CHECK_THROWS_AS(GiantAtomSpec(0.7, 0.3, {}), ConfigError);
    CHECK_THROWS_AS(GiantAtomSpec(NAN, 0.3, {{0, 0, 0}}), ConfigError);
    CHECK(wrap_phase(-1e-20) < 2 * pi);
    CHECK(wrap_phase(2 * pi) == 0.0);
}

TEST_CASE("weak-coupling warning") {
    CHECK_FALSE(GiantAtomSpec(0, 0.3, {{0, 0, 0}}).weak_coupling_warning(1.0));
    CHECK(GiantAtomSpec(0, 0.5, {{0, 0, 0}}).weak_coupling_warning(1.0));
    CHECK(GiantAtomSpec(0, 2.0, {{0, 0, 0}}).weak_coupling_warning(1.0));
    CHECK_FALSE(GiantAtomSpec(0, 2.0, {{0, 0, 0}}).weak_coupling_warning(10.0));
}

TEST_CASE("two-point phase solutions") {
    CHECK(*solve_phase_two_points(0, 1, 1) == doctest::Approx(5 * pi / 3));
    CHECK(*solve_phase_two_points(1, 0, 1) == doctest::Approx(pi / 3));
    CHECK(*solve_phase_two_points(0, 1, -1) == doctest::Approx(pi / 3));
    CHECK_FALSE(solve_phase_two_points(1, 1, 1));
    CHECK_FALSE(solve_phase_two_points(3, 0, -1));
    CHECK_THROWS_AS(solve_phase_two_points(0, 1, 2), std::invalid_argument);
}

TEST_CASE("structure factor of the default giant atom") {
    const GiantAtomSpec atom(0.7, 0.18, {{0, 0, 0.0}, {0, 1, -pi / 3}});
    CHECK(std::abs(structure_factor(atom, -1, Vec2(0, 0))) < 1e-15);
    CHECK(std::abs(structure_factor(atom, 1, Vec2(0, 0))) == doctest::Approx(std::sqrt(3.0)));
    CHECK(oracle::interference(atom, 1) == doctest::Approx(3.0));
    CHECK(oracle::interference(atom, -1) < 1e-28);
    // |F_{-tau}(q)|^2 = 2 - 2 cos(sqrt3 q_y) away from the valley centre.
    const double qy = 0.3;
    CHECK(std::norm(structure_factor(atom, -1, Vec2(0.2, qy))) ==
          doctest::Approx(2 - 2 * std::cos(std::sqrt(3.0) * qy)));
}

TEST_CASE("selectivity report") {
    const GiantAtomSpec sel(0, 0.2, {{0, 0, 0.0}, {0, 1, -pi / 3}});
    const auto r = check_valley_selective(sel, 1);
    CHECK(r.selective());
    CHECK(r.modulus_tau == doctest::Approx(std::sqrt(3.0)));
    CHECK(r.modulus_minus_tau < 1e-12);
    CHECK(r.max_separation == doctest::Approx(std::sqrt(3.0)));
    CHECK_FALSE(check_valley_selective(sel, -1).selective());

    const GiantAtomSpec normal(0, 0.2, {{0, 0, 0.0}});
    const auto n = check_valley_selective(normal, 1);
    CHECK(n.couples_to_tau);
    CHECK_FALSE(n.decoupled_from_minus_tau);

    const GiantAtomSpec far(0, 0.2, {{0, 0, 0.0}, {0, 3, *solve_phase_two_points(0, 3 + 1, 1)}});
    CHECK_FALSE(check_valley_selective(far, 1).size_ok);
}

TEST_CASE("mode couplings") {
    oracle::Rng rng(5);
    const std::size_t cells = 36;
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<CouplingPoint> pts;
        const int n = rng.integer(1, 4);
        for (int i = 0; i < n; ++i) pts.push_back({rng.integer(-3, 3), rng.integer(-3, 3), rng.uniform(0, 2 * pi)});
        const GiantAtomSpec atom(0.0, rng.uniform(0.05, 0.4), pts);
        const Vec2 k(rng.uniform(-3, 3), rng.uniform(-3, 3));
        const double delta = rng.uniform(-0.8, 0.8);
        const auto mc = mode_couplings(atom, k, delta, 1.0, 1.0, cells);
        cplx sum = 0.0;
        for (const auto& p : atom.points()) {
            const double x = 1.5 * p.n, y = 0.5 * std::sqrt(3.0) * p.n + std::sqrt(3.0) * p.m;
            sum += std::polar(1.0, p.phase - (k.x() * x + k.y() * y));
        }
        const double total = atom.g() * atom.g() * std::norm(sum) / (cells * atom.size());
        CHECK(std::norm(mc.g_plus) + std::norm(mc.g_minus) == doctest::Approx(total).epsilon(1e-12));
        const double theta = bloch_angles(k, delta).theta;
        CHECK(std::norm(mc.g_plus) == doctest::Approx(total * std::pow(std::cos(theta / 2), 2)).epsilon(1e-12));
        CHECK(mc.gauge_valid);
    }
    const GiantAtomSpec a(0, 0.2, {{0, 0, 0.0}});
    CHECK(mode_couplings(a, dirac_point(1), 0.3, 1.0, 1.0, 10).gauge_valid);
    CHECK_FALSE(mode_couplings(a, dirac_point(1), -0.3, 1.0, 1.0, 10).gauge_valid);
    CHECK_THROWS_AS(mode_couplings(a, Vec2(0, 0), 0.3, 1.0, 1.0, 0), std::invalid_argument);
}
