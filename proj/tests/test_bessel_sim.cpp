#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "besq/bessel_sim.hpp"
#include "besq/error.hpp"
#include "besq/quadrature.hpp"

using namespace besq;

TEST_CASE("philox known answer") {
    const auto r = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(r[0] == 0x6627e8d5u);
    CHECK(r[1] == 0xe169c58du);
    CHECK(r[2] == 0xbc57ac4cu);
    CHECK(r[3] == 0x9b00dbd8u);
    const auto s = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(s[0] == 0x408f276du);
    CHECK(s[1] == 0x41c83b0eu);
    CHECK(s[2] == 0xa20bc7c6u);
    CHECK(s[3] == 0x6d5451fdu);
}

TEST_CASE("hermitian eigenvalues") {
    ComplexMatrix d{3, 3, std::vector<std::complex<double>>(9, 0.0)};
    d(0, 0) = 3.0;
    d(1, 1) = -1.0;
    d(2, 2) = 2.0;
    CHECK(hermitian_eigenvalues(d) == std::vector<double>{-1.0, 2.0, 3.0});

    ComplexMatrix s{2, 2, {0.0, 1.0, 1.0, 0.0}};
    const auto ev = hermitian_eigenvalues(s);
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-14));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    ComplexMatrix h{8, 8, std::vector<std::complex<double>>(64)};
    double trace = 0.0;
    for (std::size_t j = 0; j < 8; ++j) {
        h(j, j) = nd(rng);
        trace += h(j, j).real();
        for (std::size_t i = 0; i < j; ++i) {
            h(i, j) = {nd(rng), nd(rng)};
            h(j, i) = std::conj(h(i, j));
        }
    }
    const auto e8 = hermitian_eigenvalues(h);
    CHECK(std::is_sorted(e8.begin(), e8.end()));
    double sum = 0.0;
    for (double v : e8) sum += v;
    CHECK(std::abs(sum - trace) < 1e-10);

    h(0, 1) += 1e-3;
    CHECK_THROWS_AS(hermitian_eigenvalues(h), ValidationError);
}

TEST_CASE("one path moments") {
    for (long alpha : {0L, 2L}) {
        CAPTURE(alpha);
        SimConfig cfg{10, 11, 10000};
        const auto runs = simulate_replicas(1, alpha, 1.0, cfg);
        const double horizon = runs[0].horizon();
        for (std::size_t i = 1; i < 10; ++i) {
            const double u = runs[0].times[i];
            double m = 0.0, m2 = 0.0;
            for (const auto& r : runs) {
                m += r.positions[i][0];
                m2 += r.positions[i][0] * r.positions[i][0];
            }
            m /= runs.size();
            const double se = std::sqrt((m2 / runs.size() - m * m) / runs.size());
            const double expect =
                std::pow(1.0 - u / horizon, 2) + 2.0 * (alpha + 1) * u * (horizon - u) / horizon;
            CHECK(std::abs(m - expect) <= 3.0 * se);
        }
    }
}

TEST_CASE("one path marginal at the midpoint") {
    const auto runs = simulate_replicas(1, 0, 1.0, SimConfig{10, 3, 10000});
    const double horizon = runs[0].horizon();
    const double u = 0.5 * horizon;
    // Doob-conditioned BESQ_0 bridge to 0: p_u(a, y) p_{T'-u}(y, 0) up to normalization.
    auto dens = [&](double y) {
        const double z = std::sqrt(y) / u;
        return std::exp(-y / (2 * u) - y / (2 * (horizon - u)) + z) * std::cyl_bessel_i(0.0, z) * std::exp(-z);
    };
    const double norm = quad::integrate_or_throw(dens, 0.0, 40.0, {}, "norm");
    std::vector<double> xs;
    for (const auto& r : runs) xs.push_back(r.positions[5][0]);
    std::sort(xs.begin(), xs.end());
    double dist = 0.0;
    double cdf = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cdf += quad::integrate_or_throw(dens, prev, xs[i], {}, "cdf") / norm;
        prev = xs[i];
        dist = std::max({dist, std::abs(cdf - double(i) / xs.size()), std::abs(cdf - double(i + 1) / xs.size())});
    }
    CHECK(dist <= 0.02);
}

TEST_CASE("ensemble invariants") {
    const SimConfig cfg{40, 9, 1};
    const auto e = simulate(20, 3, 1.0, cfg);
    CHECK(e.times.size() == 41);
    CHECK(e.horizon() == doctest::Approx(1.0 / 40));
    for (double x : e.positions.front()) CHECK(x == 1.0);
    for (double x : e.positions.back()) CHECK(std::abs(x) <= 1e-12);
    const auto again = simulate(20, 3, 1.0, cfg);
    CHECK(again.positions == e.positions);
    CHECK(simulate(20, 3, 1.0, SimConfig{40, 10, 1}).positions != e.positions);

    SUBCASE("non-intersection over seeded runs") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const std::size_t n = seed % 2 ? 50 : 10;
            const auto r = simulate(n, 0, 1.0, SimConfig{20, seed, 1});
            for (std::size_t i = 1; i + 1 < r.times.size(); ++i) {
                const auto& p = r.positions[i];
                for (std::size_t k = 1; k < p.size(); ++k) REQUIRE(p[k] > p[k - 1]);
                REQUIRE(p.front() >= 0.0);
            }
        }
    }
}

TEST_CASE("rotated start has the same law") {
    const std::size_t n = 4;
    const long alpha = 1;
    const std::size_t rows = n + alpha;
    ComplexMatrix x0{rows, n, std::vector<std::complex<double>>(rows * n, 0.0)};
    for (std::size_t j = 0; j < n; ++j) x0(j, j) = 1.0;
    // Householder reflection I - 2 v v* / |v|^2 is unitary.
    const std::vector<std::complex<double>> v{{1, 0.5}, {-0.3, 0.2}, {0.7, -1}, {0.1, 0.4}, {-0.6, 0}};
    double vv = 0.0;
    for (auto c : v) vv += std::norm(c);
    ComplexMatrix rot{rows, n, std::vector<std::complex<double>>(rows * n, 0.0)};
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) rot(i, j) = x0(i, j) - 2.0 * v[i] * std::conj(v[j]) / vv;
    }
    auto top_mean = [&](const ComplexMatrix& start, std::uint64_t seed) {
        double m = 0.0, m2 = 0.0;
        const std::size_t reps = 2000;
        for (std::size_t r = 0; r < reps; ++r) {
            const double x = simulate_from(start, alpha, SimConfig{10, seed, 1}, r).positions[5].back();
            m += x;
            m2 += x * x;
        }
        m /= reps;
        return std::pair{m, (m2 / reps - m * m) / reps};
    };
    const auto [m1, v1] = top_mean(x0, 1);
    const auto [m2, v2] = top_mean(rot, 2);
    CHECK(std::abs(m1 - m2) <= 3.0 * std::sqrt(v1 + v2));
}

TEST_CASE("envelope at n = 50") {
    const std::vector<double> taus{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    SUBCASE("p = 0 reaches the hard edge after t*") {
        const auto e = simulate(50, 0, 1.0, SimConfig{200, 42, 1});
        const auto rep = envelope_check(e, taus);
        CHECK(rep.max_outlier_fraction <= 0.08);
        bool low_after = false;
        for (const auto& row : rep.rows) {
            if (row.tau <= 0.3) CHECK(row.min_path >= 0.5 * row.beta);
            if (row.tau > 0.5 && row.min_path < 0.02) low_after = true;
        }
        CHECK(low_after);
    }
    SUBCASE("p = 5 stays away from zero") {
        const auto e = simulate(50, 250, 1.0, SimConfig{200, 42, 1});
        const auto rep = envelope_check(e, taus);
        CHECK(rep.max_outlier_fraction <= 0.08);
        for (const auto& row : rep.rows) CHECK(row.min_path >= 0.5 * row.beta);
    }
}

TEST_CASE("csv") {
    const auto runs = simulate_replicas(3, 0, 1.0, SimConfig{4, 1, 2});
    std::ostringstream os;
    write_csv(os, runs);
    const std::string s = os.str();
    CHECK(s.rfind("replica,tau,path_index,position\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 2 * 5 * 3);
}
