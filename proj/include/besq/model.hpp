#pragma once

// Parameters, Bessel weights and recurrence coefficients for the multiple
// orthogonal polynomials B_k of non-intersecting squared Bessel paths.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace besq {

// Raw (unscaled) picture: start position a, Bessel order alpha, time t in (0, T).
struct FiniteParams {
    double a = 1.0;
    double alpha = 0.0;
    double t = 0.5;
    double T = 1.0;

    void validate() const;
};

// Rescaled picture: t -> t/(2n), T -> 1/(2n), alpha -> p n.
class ScaledParams {
public:
    ScaledParams(double a, double t, double p);

    double a() const noexcept { return a_; }
    double t() const noexcept { return t_; }
    double p() const noexcept { return p_; }

    // Time at which the lowest paths reach the hard edge (alpha fixed).
    double t_star() const noexcept { return a_ / (1.0 + a_); }
    // a(1-t)/t: for p = 0 the three zeros of the symbol coincide here.
    double s_star() const noexcept { return a_ * (1.0 - t_) / t_; }
    // (1-t)(a(1-t) + pt): common limit of beta(s) and gamma(s) as s -> 0+.
    double x0() const noexcept { return (1.0 - t_) * (a_ * (1.0 - t_) + p_ * t_); }
    // -p^2 t^2 / (4a): upper end of supp(sigma) and limit of eta(s) as s -> 0+.
    double sigma_edge() const noexcept;

private:
    double a_, t_, p_;
};

struct CoeffTriple {
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
};

CoeffTriple recurrence_coeffs_finite(const FiniteParams& fp, long k);
// alpha = round(p n) is substituted into the finite-n coefficients.
CoeffTriple recurrence_coeffs_scaled(const ScaledParams& sp, long k, long n);
CoeffTriple limit_coeffs(const ScaledParams& sp, double s);

// Coefficient table for x P_k = P_{k+1} + sum_j row(k)[j] P_{k-j}.
// width() = m - 1 for an m-term recurrence; the Bessel family has width 3.
class Recurrence {
public:
    Recurrence(std::size_t width, std::vector<double> table);

    static Recurrence finite(const FiniteParams& fp, std::size_t count);
    static Recurrence scaled(const ScaledParams& sp, std::size_t n, std::size_t count);
    static Recurrence constant(const CoeffTriple& c, std::size_t count);

    std::size_t width() const noexcept { return width_; }
    // Number of available rows; degrees up to size() can be evaluated.
    std::size_t size() const noexcept { return table_.size() / width_; }
    std::span<const double> row(std::size_t k) const {
        return {table_.data() + k * width_, width_};
    }

private:
    std::size_t width_;
    std::vector<double> table_;
};

struct PolyValue {
    int sign = 1;
    double log_abs = 0.0;

    double value() const;
};

// sign and log|P_k(x)|, renormalised every step so degrees up to 1e5 are safe.
// Throws ZeroHit when P_k(x) is exactly zero.
PolyValue eval_poly(const Recurrence& rec, std::size_t k, double x);

// Newton correction P_k(z) / P_k'(z) evaluated through the recurrence.
std::complex<double> newton_ratio(const Recurrence& rec, std::size_t k, std::complex<double> z);

// Maximum absolute row sum of the Hessenberg matrix M_k: 1 + sum_j |row(j)|.
double zero_bound(const Recurrence& rec, std::size_t k_max);

// ---- modified Bessel functions and weights ------------------------------

double bessel_i(double nu, double z);
double log_bessel_i(double nu, double z);

// w_1 (j = 1) or w_2 (j = 2) at x > 0, and its logarithm.
double bessel_weight(const FiniteParams& fp, int j, double x);
double log_bessel_weight(const FiniteParams& fp, int j, double x);

// |int B x^k w_j| / int |B| x^k w_j over (0, inf) for an arbitrary polynomial B.
double orthogonality_residual(const FiniteParams& fp, const std::function<double(double)>& poly,
                              int j, int k);
// Same for B_n generated by the finite-n recurrence (n even, n <= 8, k < n/2).
double check_orthogonality(const FiniteParams& fp, int n, int j, int k);

}  // namespace besq
