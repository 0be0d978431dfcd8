#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "besq/equilibrium.hpp"

using namespace besq;

namespace {

const std::array<ScaledParams, 3> kSets{ScaledParams(1, 0.2, 0), ScaledParams(1, 0.9, 0), ScaledParams(1, 0.3, 5)};

DensityGrid uniform(double lo, double hi) {
    DensityGrid g;
    g.density = [lo, hi](double x) { return x > lo && x < hi ? 1.0 / (hi - lo) : 0.0; };
    g.pieces = {{lo, hi, 1.0}};
    g.mass = 1.0;
    return g;
}

}  // namespace

TEST_CASE("log potential") {
    const auto g = uniform(-1.0, 1.0);
    CHECK(log_potential(g, 0.0) == doctest::Approx(-1.0).epsilon(1e-10));
    // (x+1) log(x+1) - (x-1) log(x-1) - 2, halved.
    const double x = 3.0;
    CHECK(log_potential(g, x) == doctest::Approx(0.5 * (4 * std::log(4.0) - 2 * std::log(2.0)) - 1.0).epsilon(1e-10));
    CHECK(log_potential(g, 1e6) == doctest::Approx(std::log(1e6)).epsilon(1e-9));
    const auto h = uniform(4.0, 6.0);
    CHECK(std::abs(log_potential(h, 5.3) - log_potential(g, 0.3)) < 1e-9);
}

TEST_CASE("mu-level variational conditions") {
    for (const auto& sp : kSets) {
        CAPTURE(sp.t());
        const auto [r1, r2] = check_variational_mu(sp, 1.0);
        CHECK(r1.passed());
        CHECK(r2.passed());
        CHECK(r1.max_equality_residual <= 5e-5);
        CHECK(r2.max_equality_residual <= 5e-5);
        CHECK(r1.max_extended_residual <= 1e-5);
        CHECK(r2.max_extended_residual <= 1e-5);
        CHECK(r2.min_inequality_margin >= 0.0);
        VariationalOptions fine;
        fine.points = 120;
        CHECK(std::abs(check_variational_mu(sp, 1.0, fine).first.ell - r1.ell) <= 2e-5);
    }
}

TEST_CASE("nu-level variational conditions") {
    const std::array<bool, 3> active{false, true, true};
    for (std::size_t i = 0; i < kSets.size(); ++i) {
        CAPTURE(kSets[i].t());
        const auto [r1, r2] = check_variational_nu(kSets[i], 1.0);
        CHECK(r1.passed());
        CHECK(r2.passed());
        CHECK(r1.max_equality_residual <= 1e-4);
        CHECK(r2.max_equality_residual <= 1e-4);
        CHECK(r1.min_inequality_margin > -1e-6);
        CHECK(r2.min_inequality_margin > -1e-6);
        CHECK(r2.constraint_active == active[i]);
    }
    SUBCASE("p = 0 activity switches at t*") {
        CHECK_FALSE(check_variational_nu(ScaledParams(1, 0.45, 0), 1.0).second.constraint_active);
        CHECK(check_variational_nu(ScaledParams(1, 0.55, 0), 1.0).second.constraint_active);
    }
}

TEST_CASE("energy") {
    for (const auto& sp : kSets) {
        CAPTURE(sp.t());
        const auto n1 = interpolated(nu1_grid(sp, 1.0), 96);
        const auto n2 = interpolated(nu2_grid(sp, 1.0), 96);
        const double e = energy(n1, n2, sp, 1.0);
        const double fine = energy(interpolated(nu1_grid(sp, 1.0), 192), interpolated(nu2_grid(sp, 1.0), 192), sp, 1.0);
        CHECK(std::abs(e - fine) <= 1e-5);
        for (const auto& pr : minimality_probes(sp, 1.0, 5, 0.05, 7)) {
            CHECK(pr.base == doctest::Approx(fine).epsilon(1e-6));
            CHECK(pr.delta() > -1e-6);
        }
    }
    SUBCASE("p = 0 field specialization") {
        const ScaledParams sp(1, 0.9, 0);
        const double a = sp.a(), t = sp.t();
        const auto n1 = interpolated(nu1_grid(sp, 1.0));
        const auto n2 = interpolated(nu2_grid(sp, 1.0));
        auto explicit_field = [=](double x) { return x / (t * (1 - t)) - 2 * std::sqrt(a * x) / t; };
        CHECK(energy_with_field(n1, n2, explicit_field, 1.0) ==
              doctest::Approx(energy(n1, n2, sp, 1.0) - a * (1 - t) / t).epsilon(1e-9));
    }
    CHECK_THROWS(energy(uniform(0, 1), uniform(-2, -1), kSets[0], 1.0));
}
