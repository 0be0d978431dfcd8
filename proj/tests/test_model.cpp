#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "besq/error.hpp"
#include "besq/model.hpp"

using namespace besq;

namespace {

// Leibniz expansion of det(x I - M).
double brute_det(const std::vector<std::vector<double>>& m) {
    const std::size_t k = m.size();
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    do {
        double prod = 1.0;
        for (std::size_t i = 0; i < k; ++i) prod *= m[i][perm[i]];
        int inv = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (perm[i] > perm[j]) ++inv;
        total += (inv % 2 ? -1.0 : 1.0) * prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace

TEST_CASE("finite coefficients") {
    FiniteParams fp{1.0, 0.0, 0.25, 1.0};
    auto c0 = recurrence_coeffs_finite(fp, 0);
    CHECK(c0.b == doctest::Approx(0.9375).epsilon(1e-15));
    CHECK(c0.c == 0.0);
    CHECK(c0.d == 0.0);
    CHECK(recurrence_coeffs_finite(fp, 1).d == 0.0);
    CHECK(recurrence_coeffs_finite(fp, 2).d == doctest::Approx(0.158203125).epsilon(1e-15));
    CHECK_THROWS_AS(recurrence_coeffs_finite(fp, -1), ValidationError);
    FiniteParams bad{1.0, -1.5, 0.25, 1.0};
    CHECK_THROWS_AS(recurrence_coeffs_finite(bad, 0), ValidationError);
}

TEST_CASE("scaled coefficients and limits") {
    ScaledParams sp(1.0, 0.2, 0.0);
    CHECK_THROWS_AS(recurrence_coeffs_scaled(sp, 0, 0), ValidationError);
    auto k0 = recurrence_coeffs_scaled(sp, 0, 17);
    CHECK(k0.c == 0.0);
    CHECK(k0.d == 0.0);
    for (long n : {10L, 100L, 1000L}) {
        auto c = recurrence_coeffs_scaled(sp, n, n);
        CHECK(c.b == doctest::Approx(0.64 + 0.16 * (2.0 * n + 1.0) / n).epsilon(1e-14));
    }
    auto l0 = limit_coeffs(sp, 0.0);
    CHECK(l0.b == doctest::Approx(0.64));
    CHECK(l0.c == 0.0);
    CHECK(l0.d == 0.0);
    auto l1 = limit_coeffs(sp, 1.0);
    CHECK(l1.b == doctest::Approx(0.96).epsilon(1e-14));
    CHECK(l1.c == doctest::Approx(0.2304).epsilon(1e-14));
    CHECK(l1.d == doctest::Approx(0.016384).epsilon(1e-14));
    auto l2 = limit_coeffs(ScaledParams(1.0, 0.3, 5.0), 1.0);
    CHECK(l2.b == doctest::Approx(1.96).epsilon(1e-14));
    CHECK(l2.c == doctest::Approx(0.4704).epsilon(1e-14));
    CHECK(l2.d == doctest::Approx(0.021609).epsilon(1e-14));
}

TEST_CASE("scaled coefficients converge at rate 1/n") {
    for (auto sp : {ScaledParams(1.0, 0.2, 0.0), ScaledParams(1.0, 0.9, 0.0), ScaledParams(1.0, 0.3, 5.0),
                    ScaledParams(2.0, 0.5, 1.3)}) {
        std::vector<double> lx, ly;
        for (long n : {10L, 100L, 1000L, 10000L}) {
            double worst = 0.0;
            for (long k = 0; k <= 2 * n; k += std::max(1L, n / 50)) {
                const double s = static_cast<double>(k) / n;
                auto a = recurrence_coeffs_scaled(sp, k, n);
                auto b = limit_coeffs(sp, s);
                worst = std::max({worst, std::abs(a.b - b.b), std::abs(a.c - b.c), std::abs(a.d - b.d)});
            }
            lx.push_back(std::log(double(n)));
            ly.push_back(std::log(worst));
        }
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
        const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        CHECK(std::abs(sxy / sxx + 1.0) <= 0.2);
    }
}

TEST_CASE("eval_poly low degrees") {
    ScaledParams sp(1.0, 0.2, 0.0);
    auto rec = Recurrence::scaled(sp, 10, 20);
    auto p0 = eval_poly(rec, 0, 3.7);
    CHECK(p0.sign == 1);
    CHECK(p0.log_abs == 0.0);
    const double b0 = rec.row(0)[0];
    CHECK(eval_poly(rec, 1, b0 + 0.5).sign == 1);
    CHECK(eval_poly(rec, 1, b0 - 0.5).sign == -1);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    const double b1 = rec.row(1)[0];
    const double c1 = rec.row(1)[1];
    for (int i = 0; i < 100; ++i) {
        const double x = U(gen);
        const double direct = (x - b1) * (x - b0) - c1;
        CHECK(eval_poly(rec, 2, x).value() == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("eval_poly matches det(xI - T_k) with constant coefficients") {
    ScaledParams sp(1.0, 0.3, 5.0);
    const auto c = limit_coeffs(sp, 0.7);
    auto rec = Recurrence::constant(c, 8);
    for (std::size_t k = 1; k <= 6; ++k) {
        for (double x : {-1.3, 0.2, 0.9, 2.5}) {
            std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
            for (std::size_t i = 0; i < k; ++i) {
                m[i][i] = x - c.b;
                if (i + 1 < k) m[i][i + 1] = -1.0;
                if (i >= 1) m[i][i - 1] = -c.c;
                if (i >= 2) m[i][i - 2] = -c.d;
            }
            CHECK(eval_poly(rec, k, x).value() == doctest::Approx(brute_det(m)).epsilon(1e-10));
        }
    }
}

TEST_CASE("eval_poly survives huge degrees and reports exact zeros") {
    ScaledParams sp(1.0, 0.2, 0.0);
    auto rec = Recurrence::scaled(sp, 50000, 100000);
    auto v = eval_poly(rec, 100000, 40.0);
    CHECK(std::isfinite(v.log_abs));
    CHECK(v.log_abs > 700.0);
    auto lin = Recurrence::constant(CoeffTriple{0.5, 0.0, 0.0}, 3);
    CHECK_THROWS_AS(eval_poly(lin, 1, 0.5), ZeroHit);
}

TEST_CASE("zero bound") {
    auto rec = Recurrence::constant(CoeffTriple{0.96, 0.2304, 0.016384}, 5);
    CHECK(zero_bound(rec, 4) == doctest::Approx(2.206784).epsilon(1e-15));
    auto zero = Recurrence::constant(CoeffTriple{}, 5);
    CHECK(zero_bound(zero, 4) == 1.0);
}

TEST_CASE("Bessel I against a rational series") {
    using boost::multiprecision::cpp_rational;
    cpp_rational sum = 0, term = 1;
    for (int k = 0; k < 40; ++k) {
        if (k > 0) term = term / (4 * k * k);
        sum += term;
    }
    const double oracle = static_cast<double>(sum);
    CHECK(oracle == doctest::Approx(1.2660658777520082).epsilon(1e-15));
    CHECK(bessel_i(0.0, 1.0) == doctest::Approx(oracle).epsilon(1e-14));
    // Both regimes around the switch.
    CHECK(bessel_i(0.0, 29.9) == doctest::Approx(std::cyl_bessel_i(0.0, 29.9)).epsilon(1e-12));
    CHECK(bessel_i(1.0, 30.1) == doctest::Approx(std::cyl_bessel_i(1.0, 30.1)).epsilon(1e-12));
    CHECK(bessel_i(2.0, 100.0) == doctest::Approx(std::cyl_bessel_i(2.0, 100.0)).epsilon(1e-12));
    CHECK(bessel_i(2.5, 1e-3) == doctest::Approx(std::pow(5e-4, 2.5) / std::tgamma(3.5)).epsilon(1e-6));
    CHECK(std::isfinite(log_bessel_i(0.0, 5000.0)));
}

TEST_CASE("Bessel weights are positive") {
    FiniteParams fp{1.0, 0.0, 0.5, 1.0};
    for (double x = 0.05; x <= 50.0; x += 0.05) {
        CHECK(bessel_weight(fp, 1, x) > 0.0);
        CHECK(bessel_weight(fp, 2, x) > 0.0);
    }
    CHECK_THROWS_AS(bessel_weight(fp, 3, 1.0), ValidationError);
    CHECK_THROWS_AS(bessel_weight(fp, 1, 0.0), ValidationError);
}

TEST_CASE("multiple orthogonality") {
    FiniteParams fp{1.0, 0.0, 0.5, 1.0};
    CHECK(check_orthogonality(fp, 2, 1, 0) <= 1e-6);
    CHECK(check_orthogonality(fp, 2, 2, 0) <= 1e-6);
    for (int n : {4, 6}) {
        for (int j : {1, 2}) {
            for (int k = 0; k < n / 2; ++k) CHECK(check_orthogonality(fp, n, j, k) <= 1e-6);
        }
    }
    FiniteParams other{2.0, 1.5, 0.7, 2.0};
    for (int j : {1, 2}) {
        for (int k = 0; k < 2; ++k) CHECK(check_orthogonality(other, 4, j, k) <= 1e-6);
    }
    auto monomial = [](double x) { return x * x; };
    CHECK(orthogonality_residual(fp, monomial, 1, 0) >= 1e-2);
    CHECK_THROWS_AS(check_orthogonality(fp, 3, 1, 0), ValidationError);
}
