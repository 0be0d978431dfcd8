#pragma once

// The cubic symbol A_s(z) = z + b(s) + c(s)/z + d(s)/z^2, its root branches
// z_1, z_2, z_3 (ordered by modulus), the sets Gamma_1(s) = [beta, gamma],
// Gamma_2(s) = (-inf, eta], and the inverse maps s*(x).

#include <array>
#include <complex>

#include "besq/model.hpp"

namespace besq {

using cplx = std::complex<double>;

// Roots of z^3 + B z^2 + C z + D. Real coefficients give exactly real roots
// and exactly conjugate pairs.
std::array<cplx, 3> cubic_roots(double B, double C, double D);
std::array<cplx, 3> cubic_roots(cplx B, cplx C, cplx D);

struct SymbolRoots {
    // |z[0]| >= |z[1]| >= |z[2]|; modulus ties ordered by ascending arg in [-pi, pi).
    std::array<cplx, 3> z;
    // d(s) = 0: z[0], z[1] are the roots of the quadratic limit and z[2] = 0.
    bool degenerate = false;
};

cplx symbol_eval(const CoeffTriple& c, cplx z);
cplx symbol_eval(const ScaledParams& sp, double s, cplx z);
// A_s'(z).
cplx symbol_derivative(const CoeffTriple& c, cplx z);

SymbolRoots solve_symbol(const CoeffTriple& c, cplx x);
SymbolRoots solve_symbol(const ScaledParams& sp, double s, cplx x);

// Boundary values z_j(x + i0) from the upper half plane, computed at
// x + i eps and x + 2 i eps (eps = 1e-9 (1 + |x|)) with one Richardson step.
SymbolRoots solve_symbol_upper(const ScaledParams& sp, double s, double x);

struct EdgeCurves {
    double beta = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
};

// Critical values of A_s on the real line. For p = 0: eta = 0 when s <= s*,
// beta = 0 when s >= s*.
EdgeCurves edge_curves(const ScaledParams& sp, double s);

enum class GammaSet { Gamma1, Gamma2, Both, Neither };

// Interval test from edge_curves, cross-checked against the modulus test on
// solve_symbol. Throws InconsistentMembership if they disagree away from an edge.
GammaSet gamma_membership(const ScaledParams& sp, double s, double x);

// Smallest s >= 0 with x in Gamma_1(s), x > 0.
double s_star_upper(const ScaledParams& sp, double x);
// Largest s with x in Gamma_2(s), x < sigma_edge() (x < 0 for p = 0).
double s_star_lower(const ScaledParams& sp, double x);

// Roots of the degree-three discriminant equation in x at s = 1. For p = 0
// uses the explicit solutions x_2(t), x_3(t). Throws on a double root.
EdgeCurves boundary_cubic(const ScaledParams& sp);

// Coefficients {c0, c1, c2, c3} of the boundary equation c3 x^3 + ... + c0 = 0.
std::array<double, 4> boundary_cubic_coeffs(const ScaledParams& sp);

}  // namespace besq
