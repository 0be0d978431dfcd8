#include "besq/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "besq/error.hpp"
#include "besq/quadrature.hpp"

namespace besq {

void FiniteParams::validate() const {
    require(a > 0.0, "FiniteParams: a must be positive");
    require(alpha > -1.0, "FiniteParams: alpha must exceed -1");
    require(t > 0.0 && t < T, "FiniteParams: need 0 < t < T");
}

ScaledParams::ScaledParams(double a, double t, double p) : a_(a), t_(t), p_(p) {
    require(a >= 0.0, "ScaledParams: a must be nonnegative");
    require(t > 0.0 && t < 1.0, "ScaledParams: need 0 < t < 1");
    require(p >= 0.0, "ScaledParams: p must be nonnegative");
}

double ScaledParams::sigma_edge() const noexcept {
    if (p_ == 0.0) return 0.0;
    return -p_ * p_ * t_ * t_ / (4.0 * a_);
}

CoeffTriple recurrence_coeffs_finite(const FiniteParams& fp, long k) {
    fp.validate();
    require(k >= 0, "recurrence_coeffs_finite: k must be nonnegative");
    const double kk = static_cast<double>(k);
    const double r = (fp.T - fp.t) / fp.T;  // (T - t)/T
    const double t = fp.t;
    const double a = fp.a;
    CoeffTriple c;
    c.b = a * r * r + 2.0 * t * r * (2.0 * kk + fp.alpha + 1.0);
    c.c = 4.0 * a * t * r * r * r * kk + 4.0 * t * t * r * r * kk * (kk + fp.alpha);
    c.d = 4.0 * a * t * t * std::pow(r, 4) * kk * (kk - 1.0);
    return c;
}

CoeffTriple recurrence_coeffs_scaled(const ScaledParams& sp, long k, long n) {
    require(n >= 1, "recurrence_coeffs_scaled: n must be positive");
    require(k >= 0, "recurrence_coeffs_scaled: k must be nonnegative");
    const double a = sp.a();
    const double t = sp.t();
    const double u = 1.0 - t;
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    const double alpha = std::round(sp.p() * nn);
    CoeffTriple c;
    c.b = a * u * u + t * u * (2.0 * kk + alpha + 1.0) / nn;
    c.c = 2.0 * a * t * u * u * u * kk / nn + t * t * u * u * kk * (kk + alpha) / (nn * nn);
    c.d = a * t * t * std::pow(u, 4) * kk * (kk - 1.0) / (nn * nn);
    return c;
}

CoeffTriple limit_coeffs(const ScaledParams& sp, double s) {
    require(s >= 0.0, "limit_coeffs: s must be nonnegative");
    const double a = sp.a();
    const double t = sp.t();
    const double u = 1.0 - t;
    const double p = sp.p();
    CoeffTriple c;
    c.b = a * u * u + 2.0 * s * t * u + t * u * p;
    c.c = 2.0 * a * s * t * u * u * u + s * s * t * t * u * u + s * t * t * u * u * p;
    c.d = a * s * s * t * t * u * u * u * u;
    return c;
}

// ---- Recurrence ----------------------------------------------------------

namespace {

constexpr std::size_t kMaxWidth = 8;

template <class Fill>
Recurrence make_triple_table(std::size_t count, Fill fill) {
    std::vector<double> table(3 * count);
    for (std::size_t k = 0; k < count; ++k) {
        const CoeffTriple c = fill(static_cast<long>(k));
        table[3 * k] = c.b;
        table[3 * k + 1] = c.c;
        table[3 * k + 2] = c.d;
    }
    return Recurrence(3, std::move(table));
}

}  // namespace

Recurrence::Recurrence(std::size_t width, std::vector<double> table)
    : width_(width), table_(std::move(table)) {
    require(width_ >= 1 && width_ <= kMaxWidth, "Recurrence: width must be in [1, 8]");
    require(table_.size() % width_ == 0, "Recurrence: table size is not a multiple of width");
}

Recurrence Recurrence::finite(const FiniteParams& fp, std::size_t count) {
    return make_triple_table(count, [&](long k) { return recurrence_coeffs_finite(fp, k); });
}

Recurrence Recurrence::scaled(const ScaledParams& sp, std::size_t n, std::size_t count) {
    return make_triple_table(count, [&](long k) {
        return recurrence_coeffs_scaled(sp, k, static_cast<long>(n));
    });
}

Recurrence Recurrence::constant(const CoeffTriple& c, std::size_t count) {
    return make_triple_table(count, [&](long) { return c; });
}

double PolyValue::value() const { return sign * std::exp(log_abs); }

PolyValue eval_poly(const Recurrence& rec, std::size_t k, double x) {
    require(k <= rec.size(), "eval_poly: degree exceeds coefficient table");
    const std::size_t w = rec.width();
    // win[0] = P_j, win[1] = P_{j-1}, ...
    std::array<double, kMaxWidth> win{};
    win[0] = 1.0;
    long exponent = 0;  // values are scaled by 2^-exponent
    for (std::size_t j = 0; j < k; ++j) {
        const auto row = rec.row(j);
        double next = (x - row[0]) * win[0];
        for (std::size_t i = 1; i < w; ++i) next -= row[i] * win[i];
        for (std::size_t i = w - 1; i > 0; --i) win[i] = win[i - 1];
        win[0] = next;
        double big = 0.0;
        for (std::size_t i = 0; i < w; ++i) big = std::max(big, std::abs(win[i]));
        if (big == 0.0) throw ZeroHit(x);
        if (big > 0x1p+400 || big < 0x1p-400) {
            int e = 0;
            std::frexp(big, &e);
            for (std::size_t i = 0; i < w; ++i) win[i] = std::ldexp(win[i], -e);
            exponent += e;
        }
    }
    if (win[0] == 0.0) throw ZeroHit(x);
    PolyValue out;
    out.sign = win[0] > 0.0 ? 1 : -1;
    out.log_abs = std::log(std::abs(win[0])) + static_cast<double>(exponent) * std::log(2.0);
    return out;
}

std::complex<double> newton_ratio(const Recurrence& rec, std::size_t k, std::complex<double> z) {
    require(k >= 1 && k <= rec.size(), "newton_ratio: degree out of range");
    using C = std::complex<double>;
    const std::size_t w = rec.width();
    std::array<C, kMaxWidth> p{};
    std::array<C, kMaxWidth> dp{};
    p[0] = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        const auto row = rec.row(j);
        C next = (z - row[0]) * p[0];
        C dnext = p[0] + (z - row[0]) * dp[0];
        for (std::size_t i = 1; i < w; ++i) {
            next -= row[i] * p[i];
            dnext -= row[i] * dp[i];
        }
        for (std::size_t i = w - 1; i > 0; --i) {
            p[i] = p[i - 1];
            dp[i] = dp[i - 1];
        }
        p[0] = next;
        dp[0] = dnext;
        double big = 0.0;
        for (std::size_t i = 0; i < w; ++i) big = std::max({big, std::abs(p[i]), std::abs(dp[i])});
        if (big > 0x1p+400 || big < 0x1p-400) {
            int e = 0;
            std::frexp(big, &e);
            const double f = std::ldexp(1.0, -e);
            for (std::size_t i = 0; i < w; ++i) {
                p[i] *= f;
                dp[i] *= f;
            }
        }
    }
    return p[0] / dp[0];
}

double zero_bound(const Recurrence& rec, std::size_t k_max) {
    double r = 1.0;
    const std::size_t last = std::min(k_max + 1, rec.size());
    for (std::size_t j = 0; j < last; ++j) {
        double row_sum = 1.0;
        for (double v : rec.row(j)) row_sum += std::abs(v);
        r = std::max(r, row_sum);
    }
    return r;
}

// ---- Bessel functions ----------------------------------------------------

namespace {

// log of the power series sum_k (z^2/4)^k / (k! (nu+1)_k), Kahan-summed.
double log_series_sum(double nu, double z) {
    const double q = 0.25 * z * z;
    double sum = 1.0;
    double comp = 0.0;
    double term = 1.0;
    for (int k = 1; k < 2000; ++k) {
        term *= q / (k * (k + nu));
        const double y = term - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if (!std::isfinite(sum)) throw NonConvergence("bessel_i: series overflow");
        if (term < 1e-17 * sum && k * (k + nu) > q) return std::log(sum);
    }
    throw NonConvergence("bessel_i: power series did not converge");
}

// Large-argument expansion; returns false if the terms stop shrinking first.
bool log_asymptotic(double nu, double z, double& out) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (8.0 * k * z);
        if (std::abs(next) > std::abs(term)) return false;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) {
            out = z - 0.5 * std::log(2.0 * M_PI * z) + std::log(sum);
            return true;
        }
    }
    return false;
}

}  // namespace

double log_bessel_i(double nu, double z) {
    require(z > 0.0, "bessel_i: argument must be positive");
    require(nu > -1.0, "bessel_i: order must exceed -1");
    constexpr double kSwitch = 30.0;
    if (z > kSwitch && nu * nu < z) {
        double out = 0.0;
        if (log_asymptotic(nu, z, out)) return out;
    }
    if (z > 700.0) throw NonConvergence("bessel_i: neither series nor asymptotic regime applies");
    return nu * std::log(0.5 * z) - std::lgamma(nu + 1.0) + log_series_sum(nu, z);
}

double bessel_i(double nu, double z) { return std::exp(log_bessel_i(nu, z)); }

double log_bessel_weight(const FiniteParams& fp, int j, double x) {
    require(j == 1 || j == 2, "bessel_weight: j must be 1 or 2");
    require(x > 0.0, "bessel_weight: x must be positive");
    const double nu = j == 1 ? fp.alpha : fp.alpha + 1.0;
    const double decay = fp.T * x / (2.0 * fp.t * (fp.T - fp.t));
    return 0.5 * nu * std::log(x) - decay + log_bessel_i(nu, std::sqrt(fp.a * x) / fp.t);
}

double bessel_weight(const FiniteParams& fp, int j, double x) {
    return std::exp(log_bessel_weight(fp, j, x));
}

// ---- orthogonality -------------------------------------------------------

double orthogonality_residual(const FiniteParams& fp, const std::function<double(double)>& poly,
                              int j, int k) {
    fp.validate();
    require(k >= 0, "orthogonality: k must be nonnegative");
    auto log_env = [&](double x) {
        return std::log(std::abs(poly(x)) + 1e-300) + k * std::log(x) + log_bessel_weight(fp, j, x);
    };
    // Geometric scan for the peak and for the point where the tail is negligible.
    std::vector<double> breaks{0.0};
    double peak = -std::numeric_limits<double>::infinity();
    double x = 1e-3;
    int below = 0;
    for (int i = 0; i < 200 && below < 3; ++i, x *= 1.5) {
        const double h = log_env(x);
        if (h > peak) peak = h;
        breaks.push_back(x);
        below = (h < peak - 40.0 && x > 1.0) ? below + 1 : 0;
    }
    require(below >= 3, "orthogonality: integrand tail not found");
    const double scale = peak;
    auto f = [&](double y) {
        return poly(y) * std::exp(k * std::log(y) + log_bessel_weight(fp, j, y) - scale);
    };
    auto fabs_ = [&](double y) { return std::abs(f(y)); };

    quad::Options opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-13;
    double num = 0.0, den = 0.0, num_err = 0.0;
    // First panel with x = b u^2 to soften a possible x^alpha endpoint.
    const double b0 = breaks[1];
    auto sq = [&](auto&& g) {
        return [&, g](double u) { return g(b0 * u * u) * 2.0 * b0 * u; };
    };
    {
        auto r1 = quad::integrate(sq(f), 0.0, 1.0, opt);
        auto r2 = quad::integrate(sq(fabs_), 0.0, 1.0, opt);
        num += r1.value;
        num_err += r1.error;
        den += r2.value;
    }
    for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
        auto r1 = quad::integrate(f, breaks[i], breaks[i + 1], opt);
        auto r2 = quad::integrate(fabs_, breaks[i], breaks[i + 1], opt);
        num += r1.value;
        num_err += r1.error;
        den += r2.value;
    }
    if (!(den > 0.0) || num_err > 1e-10 * den) {
        throw NonConvergence("orthogonality: quadrature error " + std::to_string(num_err / den) +
                             " exceeds 1e-10");
    }
    return std::abs(num) / den;
}

double check_orthogonality(const FiniteParams& fp, int n, int j, int k) {
    require(n >= 2 && n % 2 == 0 && n <= 8, "check_orthogonality: n must be even and <= 8");
    require(k >= 0 && k < n / 2, "check_orthogonality: need 0 <= k < n/2");
    const Recurrence rec = Recurrence::finite(fp, static_cast<std::size_t>(n));
    auto poly = [&](double x) {
        try {
            return eval_poly(rec, static_cast<std::size_t>(n), x).value();
        } catch (const ZeroHit&) {
            return 0.0;
        }
    };
    return orthogonality_residual(fp, poly, j, k);
}

}  // namespace besq
