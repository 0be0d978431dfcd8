#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "besq/error.hpp"
#include "besq/polyzeros.hpp"
#include "besq/symbol.hpp"

using namespace besq;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> expand(const std::vector<double>& roots) {
    std::vector<cplx> c{1.0};
    for (double r : roots) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j + 1] += c[j];
            next[j] -= r * c[j];
        }
        c = next;
    }
    return c;
}

}  // namespace

TEST_CASE("low-degree zeros") {
    ScaledParams sp(1.0, 0.2, 0.0);
    auto rec = Recurrence::scaled(sp, 20, 40);
    auto z1 = zeros_interlaced(rec, 1);
    CHECK(z1.zeros[0] == doctest::Approx(rec.row(0)[0]).epsilon(1e-11));
    auto z2 = zeros_interlaced(rec, 2);
    const double b0 = rec.row(0)[0], b1 = rec.row(1)[0], c1 = rec.row(1)[1];
    const double B = b0 + b1, C = b0 * b1 - c1;
    const double disc = std::sqrt(B * B - 4.0 * C);
    CHECK(z2.zeros[0] == doctest::Approx(0.5 * (B - disc)).epsilon(1e-10));
    CHECK(z2.zeros[1] == doctest::Approx(0.5 * (B + disc)).epsilon(1e-10));
}

TEST_CASE("zeros sit inside the zero bound and the limiting support") {
    ScaledParams sp(1.0, 0.2, 0.0);
    for (std::size_t n : {10u, 50u, 200u}) {
        auto rec = Recurrence::scaled(sp, n, 2 * n + 1);
        const double R = zero_bound(rec, 2 * n);
        auto zs = zeros_interlaced(rec, 2 * n);
        CHECK(zs.zeros.front() > -R);
        CHECK(zs.zeros.back() < R);
    }
    auto rec = Recurrence::scaled(sp, 100, 101);
    auto zs = zeros_interlaced(rec, 100);
    const double g = edge_curves(sp, 1.0).gamma;
    CHECK(zs.zeros.front() > 0.0);
    CHECK(zs.zeros.back() <= g + 0.1);
}

TEST_CASE("verify_interlacing") {
    ZeroSet a{1, {1.0}, 5.0}, b{2, {0.5, 2.0}, 5.0}, c{2, {2.0, 3.0}, 5.0};
    CHECK(verify_interlacing(a, b));
    CHECK_FALSE(verify_interlacing(a, c));
    for (double t : {0.2, 0.9}) {
        ScaledParams sp(1.0, t, 0.0);
        auto rec = Recurrence::scaled(sp, 150, 300);
        ZeroSet prev;
        bool ok = true, positive = true;
        zero_sweep(rec, 300, [&](const ZeroSet& zs) {
            if (zs.k > 1) ok = ok && verify_interlacing(prev, zs);
            positive = positive && zs.zeros.front() > 0.0;
            prev = zs;
        });
        CHECK(ok);
        CHECK(positive);
    }
}

TEST_CASE("non-interlacing family is detected") {
    // x P_k = P_{k+1} + P_{k-2}: complex zeros appear at degree 3.
    auto rec = Recurrence::constant(CoeffTriple{0.0, 0.0, 1.0}, 10);
    CHECK_THROWS_AS(zeros_interlaced(rec, 6), InterlacingViolation);
}

TEST_CASE("ratio asymptotics") {
    ScaledParams sp(1.0, 0.2, 0.0);
    const double x = 2.0 * edge_curves(sp, 1.0).gamma;
    double prev = 1e9;
    for (std::size_t n : {100u, 200u, 400u, 800u, 1600u}) {
        const double x_out = std::max(x, 1.01 * zero_bound(Recurrence::scaled(sp, n, n + 1), n));
        const double dev = ratio_asymptotics_check(sp, x_out, n);
        if (n == 400) CHECK(dev <= 1e-2);
        CHECK(dev < prev);
        prev = dev;
    }
    const double big = 1e8;
    CHECK(ratio_asymptotics_check(sp, big, 50) / big < 1e-6);
}

TEST_CASE("aberth_roots") {
    std::vector<double> c{1.0, 0.0, 1.0};
    auto r = aberth_roots(std::span<const double>(c));
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
    CHECK(std::abs(r[0] - cplx(0, -1)) < 1e-14);
    CHECK(std::abs(r[1] - cplx(0, 1)) < 1e-14);

    std::vector<double> wr;
    for (int i = 1; i <= 10; ++i) wr.push_back(i);
    auto w = aberth_roots(std::span<const cplx>(expand(wr)));
    std::sort(w.begin(), w.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (int i = 0; i < 10; ++i) CHECK(std::abs(w[i] - double(i + 1)) < 1e-6);

    // Symbol zeros at x = 0: double root.
    const auto lc = limit_coeffs(ScaledParams(1.0, 0.2, 0.0), 1.0);
    std::vector<double> sc{lc.d, lc.c, lc.b, 1.0};
    auto s = aberth_roots(std::span<const double>(sc));
    std::sort(s.begin(), s.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    CHECK(std::abs(s[0] + 0.64) < 1e-12);
    CHECK(std::abs(s[1] + 0.16) < 1e-7);
    CHECK(std::abs(s[2] + 0.16) < 1e-7);

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + trial % 12;
        std::vector<double> roots;
        for (int i = 0; i < d; ++i) roots.push_back(U(gen));
        std::sort(roots.begin(), roots.end());
        auto got = aberth_roots(std::span<const cplx>(expand(roots)));
        std::sort(got.begin(), got.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
        bool close_pair = false;
        for (int i = 0; i + 1 < d; ++i) close_pair = close_pair || roots[i + 1] - roots[i] < 1e-2;
        if (close_pair) continue;
        for (int i = 0; i < d; ++i) CHECK(std::abs(got[i] - roots[i]) < 1e-8);
    }
    std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS(aberth_roots(std::span<const double>(bad)), ValidationError);
}

TEST_CASE("toeplitz spectrum") {
    ScaledParams sp(1.0, 0.2, 0.0);
    auto one = toeplitz_spectrum(sp, 1.0, 1);
    CHECK(one[0].real() == doctest::Approx(0.96));
    auto two = toeplitz_spectrum(sp, 1.0, 2);
    CHECK(std::abs(two[0] - 0.48) < 1e-12);
    CHECK(std::abs(two[1] - 1.44) < 1e-12);
    const auto e = edge_curves(sp, 1.0);
    double prev = 1e9;
    for (std::size_t n : {32u, 64u, 128u, 256u}) {
        auto ev = toeplitz_spectrum(sp, 1.0, n);
        CHECK(ev.size() == n);
        const double h = hausdorff_to_interval(ev, e.beta, e.gamma);
        CHECK(h < prev);
        prev = h;
        if (n >= 128) {
            for (auto z : ev) CHECK(std::abs(z - std::clamp(z.real(), e.beta, e.gamma)) <= 0.05);
        }
    }
}

TEST_CASE("toeplitz spectrum with eigenvalues clustered at the hard edge") {
    ScaledParams sp(1.0, 0.9, 0.0);
    const auto e = edge_curves(sp, 1.0);
    const auto ev = toeplitz_spectrum(sp, 1.0, 128);
    CHECK(ev.size() == 128);
    CHECK(hausdorff_to_interval(ev, e.beta, e.gamma) < 0.01);
}

TEST_CASE("kolmogorov distance") {
    EmpiricalMeasure m({0.25, 0.75});
    CHECK(m.cdf(0.5) == 0.5);
    CHECK(kolmogorov_distance(m, [](double x) { return std::clamp(x, 0.0, 1.0); }) ==
          doctest::Approx(0.25));
}
