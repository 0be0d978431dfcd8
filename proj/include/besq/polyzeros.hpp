#pragma once

// Real zeros of recurrence polynomials by interlacing-bracketed bisection,
// empirical zero distributions, Aberth-Ehrlich root finding and finite
// Toeplitz spectra.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "besq/model.hpp"

namespace besq {

struct ZeroSet {
    std::size_t k = 0;
    std::vector<double> zeros;  // strictly increasing
    double radius = 0.0;
};

class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(std::vector<double> atoms);

    const std::vector<double>& atoms() const noexcept { return atoms_; }
    // Right-continuous counting CDF.
    double cdf(double x) const;

private:
    std::vector<double> atoms_;
};

// sup |F_emp - F| over the jump points, both one-sided limits included.
double kolmogorov_distance(const EmpiricalMeasure& emp, const std::function<double(double)>& cdf);

// Zero set of P_k from the zero set of P_{k-1}. Throws InterlacingViolation
// if a bracket has no sign change.
ZeroSet next_zero_set(const Recurrence& rec, const ZeroSet& prev, double radius);

// Zeros of P_k, built up from P_1.
ZeroSet zeros_interlaced(const Recurrence& rec, std::size_t k);

// Zero sets of P_1, ..., P_kmax; calls visit(zs) for each in order.
void zero_sweep(const Recurrence& rec, std::size_t k_max,
                const std::function<void(const ZeroSet&)>& visit);

bool verify_interlacing(const ZeroSet& zs_k, const ZeroSet& zs_k1);

// |B_{n+1,n}(x)/B_{n,n}(x) - z_1(x, 1)| for real x outside [-R, R].
double ratio_asymptotics_check(const ScaledParams& sp, double x, std::size_t n);

// Roots of sum_j coeffs[j] z^j (ascending order), degree <= 512.
std::vector<std::complex<double>> aberth_roots(std::span<const std::complex<double>> coeffs);
std::vector<std::complex<double>> aberth_roots(std::span<const double> coeffs);

// Eigenvalues of the n x n Toeplitz matrix T_n(A_s), i.e. the zeros of the
// constant-coefficient recurrence polynomial of degree n (n <= 512).
std::vector<std::complex<double>> toeplitz_spectrum(const ScaledParams& sp, double s, std::size_t n);

// Hausdorff distance between a point set and the real interval [lo, hi].
double hausdorff_to_interval(std::span<const std::complex<double>> pts, double lo, double hi);

}  // namespace besq
