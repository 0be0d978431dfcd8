#include "besq/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "besq/error.hpp"

namespace besq {

namespace {

constexpr double kTwoPiOver3 = 2.0 * M_PI / 3.0;

// arg mapped to [-pi, pi).
double arg_half_open(cplx z) {
    const double a = std::arg(z);
    return a >= M_PI ? a - 2.0 * M_PI : a;
}

void sort_roots(std::array<cplx, 3>& z) {
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        const double ma = std::abs(a);
        const double mb = std::abs(b);
        if (std::abs(ma - mb) > 1e-13 * std::max(ma, mb)) return ma > mb;
        return arg_half_open(a) < arg_half_open(b);
    });
}

template <class T>
T cubic_value(T B, T C, T D, T z) {
    return ((z + B) * z + C) * z + D;
}

template <class T>
T cubic_slope(T B, T C, T z) {
    return (3.0 * z + 2.0 * B) * z + C;
}

// Newton steps that are kept only while the residual shrinks.
template <class T>
T polish(T B, T C, T D, T z, int steps = 3) {
    double res = std::abs(cubic_value(B, C, D, z));
    for (int i = 0; i < steps && res > 0.0; ++i) {
        const T slope = cubic_slope(B, C, z);
        if (slope == T(0)) break;
        const T next = z - cubic_value(B, C, D, z) / slope;
        const double r = std::abs(cubic_value(B, C, D, next));
        if (!(r < res)) break;
        z = next;
        res = r;
    }
    return z;
}

// Quadratic factor z^2 + p z + q left after removing the root r of the cubic.
template <class T>
void deflate(T B, T C, T D, T r, T& p, T& q) {
    q = -D / r;
    const T via_sum = B + r;
    // B + r cancels when r carries most of the root sum; use C = q - r p instead.
    p = std::abs(via_sum) < 0.5 * std::abs(r) ? (q - C) / r : via_sum;
}

std::array<cplx, 2> quadratic_roots(double p, double q) {
    const double disc = std::fma(p, p, -4.0 * q);
    if (disc >= 0.0) {
        const double w = -0.5 * (p + std::copysign(std::sqrt(disc), p));
        if (w == 0.0) return {cplx(0.0), cplx(0.0)};
        return {cplx(w), cplx(q / w)};
    }
    const double re = -0.5 * p;
    const double im = 0.5 * std::sqrt(-disc);
    return {cplx(re, -im), cplx(re, im)};
}

std::array<cplx, 2> quadratic_roots(cplx p, cplx q) {
    const cplx root = std::sqrt(p * p - 4.0 * q);
    const cplx plus = p + root;
    const cplx minus = p - root;
    const cplx w = -0.5 * (std::abs(plus) >= std::abs(minus) ? plus : minus);
    if (w == cplx(0.0)) return {cplx(0.0), cplx(0.0)};
    return {w, q / w};
}

}  // namespace

std::array<cplx, 3> cubic_roots(double B, double C, double D) {
    std::array<cplx, 3> out;
    if (D == 0.0) {
        const auto qr = quadratic_roots(B, C);
        out = {qr[0], qr[1], cplx(0.0)};
        sort_roots(out);
        return out;
    }
    const double p = C - B * B / 3.0;
    const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    double r = 0.0;
    if (disc > 0.0) {
        const double u = -std::copysign(std::cbrt(0.5 * std::abs(q) + std::sqrt(disc)), q);
        r = (u == 0.0 ? 0.0 : u - p / (3.0 * u)) - B / 3.0;
    } else if (p == 0.0) {
        r = -B / 3.0;
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(-4.0 * q / (m * m * m), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double y = m * std::cos(phi - kTwoPiOver3 * k) - B / 3.0;
            if (std::abs(y) > std::abs(r)) r = y;
        }
    }
    r = polish(B, C, D, r);
    if (r == 0.0) r = std::numeric_limits<double>::min();
    double p2 = 0.0, q2 = 0.0;
    deflate(B, C, D, r, p2, q2);
    auto qr = quadratic_roots(p2, q2);
    if (qr[0].imag() == 0.0) {
        qr[0] = polish(B, C, D, qr[0].real());
        qr[1] = polish(B, C, D, qr[1].real());
    } else {
        const cplx up = polish<cplx>(B, C, D, qr[1]);
        qr = {std::conj(up), up};
    }
    out = {cplx(r), qr[0], qr[1]};
    sort_roots(out);
    return out;
}

std::array<cplx, 3> cubic_roots(cplx B, cplx C, cplx D) {
    if (B.imag() == 0.0 && C.imag() == 0.0 && D.imag() == 0.0) {
        return cubic_roots(B.real(), C.real(), D.real());
    }
    std::array<cplx, 3> out;
    if (D == cplx(0.0)) {
        const auto qr = quadratic_roots(B, C);
        out = {qr[0], qr[1], cplx(0.0)};
        sort_roots(out);
        return out;
    }
    const cplx p = C - B * B / 3.0;
    const cplx q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
    const cplx root = std::sqrt(0.25 * q * q + p * p * p / 27.0);
    const cplx ua = -0.5 * q + root;
    const cplx ub = -0.5 * q - root;
    const cplx u3 = std::abs(ua) >= std::abs(ub) ? ua : ub;
    cplx r = -B / 3.0;
    if (u3 != cplx(0.0)) {
        const cplx u = std::polar(std::cbrt(std::abs(u3)), std::arg(u3) / 3.0);
        const cplx omega = std::polar(1.0, kTwoPiOver3);
        cplx uk = u;
        double best = -1.0;
        for (int k = 0; k < 3; ++k, uk *= omega) {
            const cplx z = uk - p / (3.0 * uk) - B / 3.0;
            if (std::abs(z) > best) {
                best = std::abs(z);
                r = z;
            }
        }
    }
    r = polish(B, C, D, r);
    if (r == cplx(0.0)) r = std::numeric_limits<double>::min();
    cplx p2, q2;
    deflate(B, C, D, r, p2, q2);
    auto qr = quadratic_roots(p2, q2);
    out = {r, polish(B, C, D, qr[0]), polish(B, C, D, qr[1])};
    sort_roots(out);
    return out;
}

cplx symbol_eval(const CoeffTriple& c, cplx z) {
    require(z != cplx(0.0), "symbol_eval: z must be nonzero");
    return z + c.b + (c.c + c.d / z) / z;
}

cplx symbol_eval(const ScaledParams& sp, double s, cplx z) {
    return symbol_eval(limit_coeffs(sp, s), z);
}

cplx symbol_derivative(const CoeffTriple& c, cplx z) {
    require(z != cplx(0.0), "symbol_derivative: z must be nonzero");
    return 1.0 - (c.c + 2.0 * c.d / z) / (z * z);
}

SymbolRoots solve_symbol(const CoeffTriple& c, cplx x) {
    SymbolRoots out;
    if (c.d == 0.0) {
        out.degenerate = true;
        const cplx B = c.b - x;
        if (c.c == 0.0) {
            out.z = {-B, cplx(0.0), cplx(0.0)};
        } else {
            const auto qr = x.imag() == 0.0 ? quadratic_roots(B.real(), c.c)
                                            : quadratic_roots(B, cplx(c.c));
            out.z = {qr[0], qr[1], cplx(0.0)};
            std::array<cplx, 3> tmp = out.z;
            sort_roots(tmp);
            out.z = tmp;
        }
        return out;
    }
    if (x.imag() == 0.0) {
        out.z = cubic_roots(c.b - x.real(), c.c, c.d);
    } else {
        out.z = cubic_roots(cplx(c.b) - x, cplx(c.c), cplx(c.d));
    }
    return out;
}

SymbolRoots solve_symbol(const ScaledParams& sp, double s, cplx x) {
    const CoeffTriple c = limit_coeffs(sp, s);
    if (x == cplx(0.0) && c.d != 0.0) {
        // Zeros of the symbol straight from its factorisation.
        const double u = 1.0 - sp.t();
        const double S = s * sp.t() * u;
        SymbolRoots out;
        if (sp.p() == 0.0) {
            out.z = {cplx(-sp.a() * u * u), cplx(-S), cplx(-S)};
        } else {
            const double Q = u * (sp.a() * u + (s + sp.p()) * sp.t());
            const double R = sp.a() * s * sp.t() * u * u * u;
            const auto qr = quadratic_roots(Q, R);
            out.z = {cplx(-S), qr[0], qr[1]};
        }
        sort_roots(out.z);
        return out;
    }
    return solve_symbol(c, x);
}

SymbolRoots solve_symbol_upper(const ScaledParams& sp, double s, double x) {
    const CoeffTriple c = limit_coeffs(sp, s);
    const double eps = 1e-9 * (1.0 + std::abs(x));
    const auto r1 = solve_symbol(c, cplx(x, eps));
    const auto r2 = solve_symbol(c, cplx(x, 2.0 * eps));
    SymbolRoots out;
    out.degenerate = r1.degenerate;
    for (int j = 0; j < 3; ++j) out.z[j] = 2.0 * r1.z[j] - r2.z[j];
    return out;
}

// ---- edges -----------------------------------------------------------------

namespace {

// A_s at real z via the factorised symbol.
double symbol_real(const ScaledParams& sp, double s, double z) {
    const double u = 1.0 - sp.t();
    const double S = s * sp.t() * u;
    if (sp.p() == 0.0) {
        const double A0 = sp.a() * u * u;
        return (z + A0) * (z + S) * (z + S) / (z * z);
    }
    const double Q = u * (sp.a() * u + (s + sp.p()) * sp.t());
    const double R = sp.a() * s * sp.t() * u * u * u;
    return (z + S) * ((z + Q) * z + R) / (z * z);
}

}  // namespace

EdgeCurves edge_curves(const ScaledParams& sp, double s) {
    require(s > 0.0, "edge_curves: s must be positive");
    require(sp.a() > 0.0, "edge_curves: a must be positive");
    const double u = 1.0 - sp.t();
    EdgeCurves e;
    if (sp.p() == 0.0) {
        // Critical points: the double zero -S and the roots of z^2 - S z - 2 A0 S.
        const double A0 = sp.a() * u * u;
        const double S = s * sp.t() * u;
        const double root = std::sqrt(S * S + 8.0 * A0 * S);
        const double y_pos = 0.5 * (S + root);
        const double y_neg = -2.0 * A0 * S / y_pos;
        e.gamma = symbol_real(sp, s, y_pos);
        const double s_star = sp.s_star();
        if (s < s_star) {
            e.beta = std::max(0.0, symbol_real(sp, s, y_neg));
            e.eta = 0.0;
        } else if (s > s_star) {
            e.beta = 0.0;
            e.eta = std::min(0.0, symbol_real(sp, s, y_neg));
        } else {
            e.beta = 0.0;
            e.eta = 0.0;
        }
        return e;
    }
    // p > 0: real roots y1 < y2 < 0 < y3 of z^3 - c z - 2d.
    const CoeffTriple c = limit_coeffs(sp, s);
    if (c.c * c.c * c.c < 27.0 * c.d * c.d) {
        throw NumericalError("edge_curves: symbol has fewer than three real critical points");
    }
    const double m = 2.0 * std::sqrt(c.c / 3.0);
    const double phi = std::acos(std::clamp(8.0 * c.d / (m * m * m), -1.0, 1.0)) / 3.0;
    double y3 = m * std::cos(phi);
    double y1 = m * std::cos(phi - 2.0 * kTwoPiOver3);
    y3 = polish(0.0, -c.c, -2.0 * c.d, y3);
    y1 = polish(0.0, -c.c, -2.0 * c.d, y1);
    double y2 = 2.0 * c.d / (y1 * y3);
    y2 = polish(0.0, -c.c, -2.0 * c.d, y2);
    if (!(y1 < y2 && y2 < 0.0 && y3 > 0.0)) {
        throw NumericalError("edge_curves: unexpected ordering of critical points");
    }
    e.gamma = symbol_real(sp, s, y3);
    e.beta = symbol_real(sp, s, y1);
    e.eta = symbol_real(sp, s, y2);
    if (!(e.eta < 0.0 && e.beta > 0.0 && e.beta < e.gamma)) {
        throw NumericalError("edge_curves: critical values out of order");
    }
    return e;
}

GammaSet gamma_membership(const ScaledParams& sp, double s, double x) {
    const EdgeCurves e = edge_curves(sp, s);
    const bool in1 = x >= e.beta && x <= e.gamma;
    const bool in2 = x <= e.eta;
    const auto roots = solve_symbol(sp, s, cplx(x));
    const double m0 = std::abs(roots.z[0]);
    const double m1 = std::abs(roots.z[1]);
    const double m2 = std::abs(roots.z[2]);
    const double tol = 1e-9 * (1.0 + m0);
    const bool mod1 = m0 - m1 <= tol;
    const bool mod2 = m1 - m2 <= tol;
    if (in1 != mod1 || in2 != mod2) {
        const double band = 1e-7 * (1.0 + std::abs(x));
        const double dist = std::min({std::abs(x - e.beta), std::abs(x - e.gamma),
                                      std::abs(x - e.eta)});
        if (dist > band) {
            throw InconsistentMembership("gamma_membership: modulus and interval tests disagree at x=" +
                                         std::to_string(x) + ", s=" + std::to_string(s));
        }
    }
    if (in1 && in2) return GammaSet::Both;
    if (in1) return GammaSet::Gamma1;
    if (in2) return GammaSet::Gamma2;
    return GammaSet::Neither;
}

namespace {

// Root of f(s) = target on (lo, hi) for monotone f; f(lo) and f(hi) bracket target.
template <class F>
double bisect(F f, double target, double lo, double hi, bool increasing) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= 1e-16 * hi) break;
        const bool above = f(mid) > target;
        if (above == increasing) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double s_star_upper(const ScaledParams& sp, double x) {
    require(x > 0.0, "s_star_upper: x must be positive");
    const double x0 = sp.x0();
    if (x == x0) return 0.0;
    if (x > x0) {
        auto gam = [&](double s) { return edge_curves(sp, s).gamma; };
        double hi = 1.0;
        for (int i = 0; gam(hi) < x; ++i) {
            if (i > 200) throw NumericalError("s_star_upper: gamma(s) never reaches x");
            hi *= 2.0;
        }
        return bisect(gam, x, 0.0, hi, true);
    }
    auto bet = [&](double s) { return edge_curves(sp, s).beta; };
    double hi = sp.p() == 0.0 ? sp.s_star() : 1.0;
    for (int i = 0; bet(hi) > x; ++i) {
        if (i > 200) throw NumericalError("s_star_upper: x lies below inf beta");
        hi *= 2.0;
    }
    return bisect(bet, x, 0.0, hi, false);
}

double s_star_lower(const ScaledParams& sp, double x) {
    const double edge = sp.sigma_edge();
    require(x < edge, "s_star_lower: x must lie below -p^2 t^2/(4a)");
    auto eta = [&](double s) { return edge_curves(sp, s).eta; };
    const double lo = sp.p() == 0.0 ? sp.s_star() : 0.0;
    double hi = std::max(1.0, 2.0 * lo);
    for (int i = 0; eta(hi) > x; ++i) {
        if (i > 200) throw NumericalError("s_star_lower: eta(s) never reaches x");
        hi *= 2.0;
    }
    return bisect(eta, x, lo, hi, false);
}

std::array<double, 4> boundary_cubic_coeffs(const ScaledParams& sp) {
    const double a = sp.a();
    const double t = sp.t();
    const double p = sp.p();
    const double u = 1.0 - t;
    const double c3 = 4.0 * a;
    const double c2 = -(8.0 * a * a * u * u + 4.0 * a * t * u * (2.0 * p + 5.0) -
                        t * t * (p + 1.0) * (p + 1.0));
    const double c1 = u * (4.0 * a * a * a * u * u * u + 4.0 * a * a * t * u * u * (2.0 * p - 3.0) +
                           2.0 * a * t * t * u * (p * p + p + 6.0) -
                           2.0 * t * t * t * (p + 2.0) * (p + 1.0) * (p + 1.0));
    const double c0 = p * p * t * t * u * u *
                      (a * a * u * u + 2.0 * a * t * u * (p - 1.0) + t * t * (p + 1.0) * (p + 1.0));
    return {c0, c1, c2, c3};
}

EdgeCurves boundary_cubic(const ScaledParams& sp) {
    require(sp.a() > 0.0, "boundary_cubic: a must be positive");
    const double a = sp.a();
    const double t = sp.t();
    const double u = 1.0 - t;
    EdgeCurves e;
    if (sp.p() == 0.0) {
        const double B = 8.0 * a * a * u * u + 20.0 * a * t * u - t * t;
        const double root = std::sqrt(t * std::pow(t + 8.0 * a * u, 3));
        const double x3 = (B + root) / (8.0 * a);
        // x2 = (B - root)/(8a), via the product of the two roots.
        const double x2 = u * std::pow(a * u - t, 3) / (a * x3);
        if (std::abs(x2) <= 1e-12 * x3) {
            throw NumericalError("boundary_cubic: x2 = 0 double root (t = t*), classification ambiguous");
        }
        e.gamma = x3;
        e.beta = x2 > 0.0 ? x2 : 0.0;
        e.eta = x2 > 0.0 ? 0.0 : x2;
        return e;
    }
    const auto k = boundary_cubic_coeffs(sp);
    auto r = cubic_roots(k[2] / k[3], k[1] / k[3], k[0] / k[3]);
    std::array<double, 3> xs{};
    for (int i = 0; i < 3; ++i) {
        if (std::abs(r[i].imag()) > 1e-12 * std::abs(r[i])) {
            throw NumericalError("boundary_cubic: non-real root");
        }
        xs[i] = r[i].real();
    }
    std::sort(xs.begin(), xs.end());
    const double scale = std::max(std::abs(xs[0]), std::abs(xs[2]));
    if (xs[1] - xs[0] <= 1e-12 * scale || xs[2] - xs[1] <= 1e-12 * scale) {
        throw NumericalError("boundary_cubic: discriminant vanishes, classification ambiguous");
    }
    e.eta = xs[0];
    e.beta = xs[1];
    e.gamma = xs[2];
    return e;
}

}  // namespace besq
