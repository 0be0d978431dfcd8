#include "besq/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include "besq/error.hpp"
#include "besq/symbol.hpp"

namespace besq {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

quad::Options inner_options() {
    quad::Options o;
    o.abs_tol = 1e-13;
    o.rel_tol = 1e-9;
    o.max_intervals = 200;
    return o;
}

// Within ~1e-6 of a support edge the conjugate root pair is almost real, its
// imaginary part carries ~sqrt(eps) relative noise and the s-profile develops
// a thin boundary layer; accept a result stuck there with a small error estimate.
template <class F>
double inner_integral(F&& f, double lo, double hi, bool cos_map, const char* what) {
    const auto r = cos_map ? quad::integrate_cos_map(f, lo, hi, inner_options())
                           : quad::integrate(f, lo, hi, inner_options());
    if (!r.converged && !(r.error <= 1e-4 * std::abs(r.value) + 1e-8)) {
        throw NonConvergence(std::string(what) + ": quadrature did not converge (estimate " +
                             sci(r.value) + ", error " + sci(r.error) + ")");
    }
    return r.value;
}

template <class F>
double integrate_piece(F&& f, const SupportPiece& pc, const quad::Options& opt, const char* what) {
    quad::Result r = std::isinf(pc.lo) ? quad::integrate_lower_tail(f, pc.hi, pc.scale, opt)
                                       : quad::integrate_cos_map(f, pc.lo, pc.hi, opt);
    if (!r.converged) {
        throw NonConvergence(std::string(what) + ": quadrature did not converge (estimate " +
                             sci(r.value) + ", error " + sci(r.error) + ")");
    }
    return r.value;
}

// z^2 / (z^3 - c z - 2d) = 1/(z A'(z)).
cplx log_derivative_of_root(const CoeffTriple& c, cplx z) {
    return z * z / (z * z * z - c.c * z - 2.0 * c.d);
}

double tail_scale(double edge) { return 1.0 + std::abs(edge); }

}  // namespace

quad::Options measure_options() {
    quad::Options o;
    o.abs_tol = 1e-11;
    o.rel_tol = 1e-10;
    o.max_intervals = 2000;
    return o;
}

double integrate_against(const DensityGrid& grid, const std::function<double(double)>& g,
                         std::span<const double> breaks, const quad::Options& opt) {
    auto f = [&](double y) {
        const double d = grid.density(y);
        return d == 0.0 ? 0.0 : g(y) * d;
    };
    double total = 0.0;
    for (const auto& pc : grid.pieces) {
        std::vector<double> cuts;
        for (double b : breaks) {
            if (b > pc.lo && b < pc.hi) cuts.push_back(b);
        }
        std::sort(cuts.begin(), cuts.end());
        double lo = pc.lo;
        for (double c : cuts) {
            SupportPiece sub{lo, c, std::isinf(lo) ? tail_scale(c) : pc.scale};
            total += integrate_piece(f, sub, opt, "integrate_against");
            lo = c;
        }
        total += integrate_piece(f, SupportPiece{lo, pc.hi, pc.scale}, opt, "integrate_against");
    }
    return total;
}

double total_mass(const DensityGrid& grid, const quad::Options& opt) {
    return integrate_against(grid, [](double) { return 1.0; }, {}, opt);
}

void tabulate(DensityGrid& grid, std::size_t per_piece) {
    require(per_piece >= 2, "tabulate: need at least two nodes per piece");
    grid.nodes.clear();
    grid.values.clear();
    grid.cumulative.clear();
    const bool finite_mass = std::isfinite(grid.mass);
    quad::Options opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 1e-9;
    double running = 0.0;
    for (std::size_t ip = 0; ip < grid.pieces.size(); ++ip) {
        const auto& pc = grid.pieces[ip];
        const bool tail = std::isinf(pc.lo);
        // Mapped variable: th in (0, pi) for cos, (0, pi/2) for the tail, from the upper end for tails.
        auto to_x = [&](double th) {
            if (tail) {
                const double tn = std::tan(th);
                return pc.hi - pc.scale * tn * tn;
            }
            return pc.lo + 0.5 * (pc.hi - pc.lo) * (1.0 - std::cos(th));
        };
        std::vector<double> th;
        const double top = tail ? 0.5 * M_PI : M_PI;
        for (std::size_t i = 0; i < per_piece; ++i) {
            // Open grid: endpoints are nudged inward.
            const double u = (i + 0.5) / static_cast<double>(per_piece);
            th.push_back(tail ? top * (1.0 - u) : top * u);
        }
        double prev_x = tail ? -kInf : pc.lo;
        for (double h : th) {
            const double x = to_x(h);
            if (finite_mass) {
                SupportPiece seg{prev_x, x, std::isinf(prev_x) ? tail_scale(x) : 1.0};
                auto r = std::isinf(seg.lo)
                             ? quad::integrate_lower_tail(grid.density, seg.hi, seg.scale, opt)
                             : quad::integrate_cos_map(grid.density, seg.lo, seg.hi, opt);
                running += r.value;
            }
            grid.nodes.push_back(x);
            grid.values.push_back(grid.density(x));
            grid.cumulative.push_back(finite_mass ? running : std::numeric_limits<double>::quiet_NaN());
            prev_x = x;
        }
        if (finite_mass) {
            running += quad::integrate_cos_map(grid.density, prev_x, pc.hi, opt).value;
        }
    }
}

namespace {

struct PieceInterpolant {
    SupportPiece piece;
    std::vector<double> theta, g, w;
    double theta_max = 0.0;

    bool tail() const { return std::isinf(piece.lo); }

    double jacobian(double th) const {
        if (tail()) {
            const double c = std::cos(th);
            return 2.0 * piece.scale * std::tan(th) / (c * c);
        }
        return 0.5 * (piece.hi - piece.lo) * std::sin(th);
    }
    double to_x(double th) const {
        if (tail()) {
            const double tn = std::tan(th);
            return piece.hi - piece.scale * tn * tn;
        }
        return piece.lo + 0.5 * (piece.hi - piece.lo) * (1.0 - std::cos(th));
    }
    double to_theta(double x) const {
        if (tail()) return std::atan(std::sqrt(std::max(0.0, piece.hi - x) / piece.scale));
        return std::acos(std::clamp(1.0 - 2.0 * (x - piece.lo) / (piece.hi - piece.lo), -1.0, 1.0));
    }
    double operator()(double x) const {
        double th = 0.0;
        double jac = 0.0;
        if (tail()) {
            th = to_theta(x);
            jac = jacobian(th);
        } else {
            // From the distance to the nearer end, so that x within rounding of an end keeps its sine.
            const double len = piece.hi - piece.lo;
            const double u = std::max(0.0, x - piece.lo) / len;
            const double v = std::max(0.0, piece.hi - x) / len;
            th = u < 0.5 ? 2.0 * std::asin(std::sqrt(u)) : M_PI - 2.0 * std::asin(std::sqrt(v));
            jac = len * std::sqrt(u * v);
        }
        if (!(jac > 0.0)) return 0.0;
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < theta.size(); ++j) {
            const double diff = th - theta[j];
            if (diff == 0.0) return g[j] / jac;
            const double c = w[j] / diff;
            num += c * g[j];
            den += c;
        }
        return std::max(0.0, num / den) / jac;
    }
};

}  // namespace

DensityGrid interpolated(const DensityGrid& grid, std::size_t per_piece) {
    require(per_piece >= 4, "interpolated: need at least four nodes per piece");
    auto parts = std::make_shared<std::vector<PieceInterpolant>>();
    for (const auto& pc : grid.pieces) {
        PieceInterpolant pi;
        pi.piece = pc;
        pi.theta_max = pi.tail() ? 0.5 * M_PI : M_PI;
        const double N = static_cast<double>(per_piece);
        for (std::size_t j = 0; j < per_piece; ++j) {
            const double phi = (2.0 * j + 1.0) * M_PI / (2.0 * N);
            const double th = 0.5 * pi.theta_max * (1.0 - std::cos(phi));
            pi.theta.push_back(th);
            pi.g.push_back(grid.density(pi.to_x(th)) * pi.jacobian(th));
            pi.w.push_back((j % 2 ? -1.0 : 1.0) * std::sin(phi));
        }
        parts->push_back(std::move(pi));
    }
    DensityGrid out;
    out.pieces = grid.pieces;
    out.mass = grid.mass;
    out.density = [parts](double x) {
        for (const auto& pi : *parts) {
            if (x > pi.piece.lo && x < pi.piece.hi) return pi(x);
        }
        return 0.0;
    };
    return out;
}

// ---- mu ------------------------------------------------------------------

double mu1_density(const ScaledParams& sp, double s, double x) {
    require(s > 0.0, "mu1_density: s must be positive");
    const CoeffTriple c = limit_coeffs(sp, s);
    const auto r = solve_symbol(sp, s, cplx(x));
    if (r.z[0].imag() == 0.0) return 0.0;
    return std::abs(log_derivative_of_root(c, r.z[0]).imag()) / M_PI;
}

double mu2_density(const ScaledParams& sp, double s, double x) {
    require(s > 0.0, "mu2_density: s must be positive");
    const CoeffTriple c = limit_coeffs(sp, s);
    const auto r = solve_symbol(sp, s, cplx(x));
    if (r.z[2].imag() == 0.0) return 0.0;
    return std::abs(log_derivative_of_root(c, r.z[2]).imag()) / M_PI;
}

double mu1_cdf(const ScaledParams& sp, double s, double x) {
    require(s > 0.0, "mu1_cdf: s must be positive");
    const auto e = edge_curves(sp, s);
    if (x <= e.beta) return 0.0;
    if (x >= e.gamma) return 1.0;
    const cplx z = solve_symbol(sp, s, cplx(x)).z[0];
    if (z.imag() == 0.0) return z.real() > 0.0 ? 1.0 : 0.0;
    return 1.0 - std::abs(std::arg(z)) / M_PI;
}

// ---- nu ------------------------------------------------------------------

double nu1_density(const ScaledParams& sp, double xi, double x) {
    require(xi > 0.0, "nu1_density: xi must be positive");
    const auto e = edge_curves(sp, xi);
    if (!(x > e.beta && x < e.gamma)) return 0.0;
    const double s0 = s_star_upper(sp, x);
    if (s0 >= xi) return 0.0;
    auto f = [&](double u) {
        const double s = s0 + u * u;
        return s > 0.0 ? mu1_density(sp, s, x) * 2.0 * u : 0.0;
    };
    return inner_integral(f, 0.0, std::sqrt(xi - s0), false, "nu1_density") / xi;
}

double nu1_cdf(const ScaledParams& sp, double xi, double x) {
    require(xi > 0.0, "nu1_cdf: xi must be positive");
    const auto e = edge_curves(sp, xi);
    if (x <= e.beta) return 0.0;
    if (x >= e.gamma) return 1.0;
    const double s0 = s_star_upper(sp, x);
    if (s0 >= xi) return x > sp.x0() ? 1.0 : 0.0;
    auto f = [&](double u) {
        const double s = s0 + u * u;
        return s > 0.0 ? mu1_cdf(sp, s, x) * 2.0 * u : 0.0;
    };
    const double inside = inner_integral(f, 0.0, std::sqrt(xi - s0), false, "nu1_cdf");
    return ((x > sp.x0() ? s0 : 0.0) + inside) / xi;
}

double nu2_density(const ScaledParams& sp, double xi, double x) {
    require(xi > 0.0, "nu2_density: xi must be positive");
    if (!(x < sp.sigma_edge())) return 0.0;
    const double smax = std::min(xi, s_star_lower(sp, x));
    auto f = [&](double s) { return s > 0.0 ? mu2_density(sp, s, x) : 0.0; };
    return inner_integral(f, 0.0, smax, true, "nu2_density") / xi;
}

// ---- sigma and V ---------------------------------------------------------

double sigma_closed(const ScaledParams& sp, double x) {
    require(x <= 0.0, "sigma_closed: x must be nonpositive");
    if (x == 0.0 || x > sp.sigma_edge()) return 0.0;
    const double t = sp.t();
    const double ax = std::abs(x);
    const double rad = 4.0 * sp.a() * ax - sp.p() * sp.p() * t * t;
    if (rad <= 0.0) return 0.0;
    return std::sqrt(rad) / (2.0 * M_PI * t * ax);
}

double sigma_numeric(const ScaledParams& sp, double x) {
    require(x < sp.sigma_edge(), "sigma_numeric: x must lie inside the support of sigma");
    const double smax = s_star_lower(sp, x);
    auto f = [&](double s) { return s > 0.0 ? mu2_density(sp, s, x) : 0.0; };
    return inner_integral(f, 0.0, smax, true, "sigma_numeric");
}

double V_closed(const ScaledParams& sp, double x) {
    require(x >= 0.0, "V_closed: x must be nonnegative");
    const double a = sp.a();
    const double t = sp.t();
    const double p = sp.p();
    const double u = 1.0 - t;
    const double root = std::sqrt(p * p * t * t + 4.0 * a * x);
    double v = x / (t * u) - root / t + a * u / t;
    if (p > 0.0) {
        // root - p t = 4 a x / (root + p t), free of cancellation.
        v += -p * std::log(4.0 * a * x / (root + p * t)) + p * std::log(2.0 * a * u);
    }
    return v;
}

double V_numeric(const ScaledParams& sp, double x) {
    require(x > 0.0, "V_numeric: x must be positive");
    if (x == sp.x0()) return 0.0;
    const double s0 = s_star_upper(sp, x);
    if (s0 == 0.0) return 0.0;
    auto integrand = [&](double s) {
        const auto r = solve_symbol(sp, s, cplx(x));
        return std::log(std::abs(r.z[0]) / std::abs(r.z[1]));
    };
    // s = s0 w^2 (3 - 2w): a log singularity at s = 0 and a square-root zero at s0.
    auto f = [&](double w) {
        const double s = s0 * w * w * (3.0 - 2.0 * w);
        return s > 0.0 && s < s0 ? integrand(s) * 6.0 * s0 * w * (1.0 - w) : 0.0;
    };
    return inner_integral(f, 0.0, 1.0, false, "V_numeric");
}

// ---- Marchenko-Pastur ----------------------------------------------------

MpEdges mp_edges(double t, double p) {
    require(t > 0.0 && t < 1.0, "mp_edges: need 0 < t < 1");
    require(p >= 0.0, "mp_edges: p must be nonnegative");
    const double w = t * (1.0 - t);
    const double r = 2.0 * std::sqrt(p + 1.0);
    return {w * (p + 2.0 - r), w * (p + 2.0 + r)};
}

double mp_density(double t, double p, double x) {
    const auto e = mp_edges(t, p);
    if (!(x > e.rho1 && x < e.rho2)) return 0.0;
    return std::sqrt((e.rho2 - x) * (x - e.rho1)) / (2.0 * M_PI * t * (1.0 - t) * x);
}

// ---- Stieltjes transform -------------------------------------------------

cplx mu1_stieltjes(const ScaledParams& sp, double s, cplx x) {
    const DensityGrid g = mu1_grid(sp, s);
    const double re = integrate_against(g, [&](double y) { return (1.0 / (x - y)).real(); });
    const double im = integrate_against(g, [&](double y) { return (1.0 / (x - y)).imag(); });
    return {re, im};
}

cplx mu1_stieltjes_closed(const ScaledParams& sp, double s, cplx x) {
    const auto r = solve_symbol(sp, s, x);
    return log_derivative_of_root(limit_coeffs(sp, s), r.z[0]);
}

// ---- grids ---------------------------------------------------------------

DensityGrid mu1_grid(const ScaledParams& sp, double s) {
    const auto e = edge_curves(sp, s);
    DensityGrid g;
    g.density = [sp, s](double x) { return mu1_density(sp, s, x); };
    g.pieces = {{e.beta, e.gamma, 1.0}};
    g.mass = 1.0;
    return g;
}

DensityGrid mu2_grid(const ScaledParams& sp, double s) {
    const auto e = edge_curves(sp, s);
    DensityGrid g;
    g.density = [sp, s](double x) { return mu2_density(sp, s, x); };
    g.pieces = {{-kInf, e.eta, tail_scale(e.eta)}};
    g.mass = 0.5;
    return g;
}

DensityGrid nu1_grid(const ScaledParams& sp, double xi) {
    const auto e = edge_curves(sp, xi);
    DensityGrid g;
    g.density = [sp, xi](double x) { return nu1_density(sp, xi, x); };
    g.pieces = {{e.beta, sp.x0(), 1.0}, {sp.x0(), e.gamma, 1.0}};
    g.mass = 1.0;
    return g;
}

DensityGrid nu2_grid(const ScaledParams& sp, double xi) {
    const auto e = edge_curves(sp, xi);
    const double edge = sp.sigma_edge();
    DensityGrid g;
    g.density = [sp, xi](double x) { return nu2_density(sp, xi, x); };
    if (e.eta < edge) {
        g.pieces = {{-kInf, e.eta, tail_scale(e.eta)}, {e.eta, edge, 1.0}};
    } else {
        g.pieces = {{-kInf, edge, tail_scale(edge)}};
    }
    g.mass = 0.5;
    return g;
}

DensityGrid sigma_grid(const ScaledParams& sp) {
    DensityGrid g;
    g.density = [sp](double x) { return x < 0.0 ? sigma_closed(sp, x) : 0.0; };
    g.pieces = {{-kInf, sp.sigma_edge(), tail_scale(sp.sigma_edge())}};
    g.mass = kInf;
    return g;
}

DensityGrid mp_grid(double t, double p) {
    const auto e = mp_edges(t, p);
    DensityGrid g;
    g.density = [t, p](double x) { return mp_density(t, p, x); };
    g.pieces = {{e.rho1, e.rho2, 1.0}};
    g.mass = 1.0;
    return g;
}

}  // namespace besq
