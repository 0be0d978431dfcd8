#include "besq/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "besq/error.hpp"
#include "besq/symbol.hpp"

namespace besq {
namespace {

quad::Options potential_options() {
    quad::Options o;
    o.abs_tol = 1e-11;
    o.rel_tol = 1e-10;
    o.max_intervals = 2000;
    return o;
}

quad::Options outer_options() {
    quad::Options o;
    o.abs_tol = 1e-9;
    o.rel_tol = 1e-8;
    o.max_intervals = 2000;
    return o;
}

double median(std::vector<double> v) {
    require(!v.empty(), "median: empty sample");
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) return *mid;
    return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

std::vector<double> interior(double lo, double hi, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) x[k] = lo + (hi - lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    return x;
}

void append(std::vector<double>& dst, const std::vector<double>& src) { dst.insert(dst.end(), src.begin(), src.end()); }

// Equality part: residual = lhs - target (target = median when fixed_zero is false).
void fill_equality(VariationalReport& r, const std::function<double(double)>& lhs, bool fixed_zero, double tol) {
    std::vector<double> vals;
    vals.reserve(r.grid.size());
    for (double x : r.grid) vals.push_back(lhs(x));
    r.ell = median(vals);
    const double target = fixed_zero ? 0.0 : r.ell;
    r.max_equality_residual = 0.0;
    r.residuals.clear();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double res = vals[i] - target;
        r.residuals.push_back(res);
        r.max_equality_residual = std::max(r.max_equality_residual, std::abs(res));
        if (std::abs(res) > tol) r.violations.push_back(r.grid[i]);
    }
}

void fill_margins(VariationalReport& r, const std::function<double(double)>& margin, double tol) {
    r.margins.clear();
    r.min_inequality_margin = r.off_grid.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    for (double x : r.off_grid) {
        const double m = margin(x);
        r.margins.push_back(m);
        r.min_inequality_margin = std::min(r.min_inequality_margin, m);
        if (m < -tol) r.violations.push_back(x);
    }
}

std::vector<double> piece_ends(const DensityGrid& g) {
    std::vector<double> b;
    for (const auto& pc : g.pieces) {
        if (std::isfinite(pc.lo)) b.push_back(pc.lo);
        b.push_back(pc.hi);
    }
    return b;
}

// Mass of sigma on [-u2, -u1] for 0 <= u1 < u2: (R(u2) - R(u1)) / (pi t),
// R(u) = r - c atan(r / c), r = sqrt(4 a u - c^2), c = p t.
double sigma_antiderivative(const ScaledParams& sp, double u) {
    const double c = sp.p() * sp.t();
    const double rad = 4.0 * sp.a() * u - c * c;
    if (rad <= 0.0) return 0.0;
    const double r = std::sqrt(rad);
    return (c > 0.0 ? r - c * std::atan(r / c) : r) / (M_PI * sp.t());
}

DensityGrid uniform_grid(double lo, double hi) {
    DensityGrid g;
    const double h = 1.0 / (hi - lo);
    g.density = [lo, hi, h](double x) { return x >= lo && x <= hi ? h : 0.0; };
    g.pieces = {{lo, hi, 1.0}};
    g.mass = 1.0;
    return g;
}

// (sigma / xi) restricted to [x1, x2] with mass 1/2, x2 <= sigma edge given.
DensityGrid sigma_slab(const ScaledParams& sp, double xi, double x2) {
    const double u2 = -x2;
    const double f2 = sigma_antiderivative(sp, u2);
    const double want = 0.5 * xi;
    double lo = u2;
    double hi = u2 + 1.0;
    while (sigma_antiderivative(sp, hi) - f2 < want) hi = u2 + 2.0 * (hi - u2);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sigma_antiderivative(sp, mid) - f2 < want ? lo : hi) = mid;
    }
    const double x1 = -0.5 * (lo + hi);
    DensityGrid g;
    g.density = [sp, xi, x1, x2](double x) { return x >= x1 && x <= x2 ? sigma_closed(sp, x) / xi : 0.0; };
    g.pieces = {{x1, x2, 1.0}};
    g.mass = 0.5;
    return g;
}

}  // namespace

double log_potential(const DensityGrid& grid, double x) {
    std::vector<double> br{x};
    const auto& first = grid.pieces.front();
    if (std::isinf(first.lo) && x < first.hi) {
        for (double d = first.scale; first.hi - d > x; d *= 4.0) br.push_back(first.hi - d);
    }
    return integrate_against(grid, [x](double y) { return std::log(std::abs(x - y)); }, br, potential_options());
}

std::pair<VariationalReport, VariationalReport> check_variational_mu(const ScaledParams& sp, double s,
                                                                     const VariationalOptions& opt) {
    require(s > 0.0, "check_variational_mu: s must be positive");
    require(opt.points >= 3, "check_variational_mu: need at least three points");
    const auto e = edge_curves(sp, s);
    const auto g1 = mu1_grid(sp, s);
    const auto g2 = mu2_grid(sp, s);
    const double w = e.gamma - e.beta;
    auto u1 = [&](double x) { return log_potential(g1, x); };
    auto u2 = [&](double x) { return log_potential(g2, x); };
    auto log_ratio = [&](double x, int i) {
        const auto z = solve_symbol(sp, s, cplx(x)).z;
        return std::log(std::abs(z[i]) / std::abs(z[i + 1]));
    };
    const std::size_t m = std::max<std::size_t>(opt.off_points / 3, 1);

    VariationalReport r1;
    r1.grid = interior(e.beta, e.gamma, opt.points);
    fill_equality(r1, [&](double x) { return 2.0 * u1(x) - u2(x); }, false, opt.tol);
    if (e.beta > 0.0) append(r1.off_grid, interior(0.0, e.beta, m));
    append(r1.off_grid, interior(e.gamma, e.gamma + w, m));
    append(r1.off_grid, interior(e.eta - w, e.eta, m));
    for (double x : r1.off_grid) {
        const double lhs = 2.0 * u1(x) - u2(x) - r1.ell;
        const double ext = std::abs(lhs - log_ratio(x, 0));
        r1.max_extended_residual = std::max(r1.max_extended_residual, ext);
        r1.margins.push_back(lhs);
        if (ext > opt.tol || lhs < -opt.tol) r1.violations.push_back(x);
    }
    r1.min_inequality_margin = *std::min_element(r1.margins.begin(), r1.margins.end());

    VariationalReport r2;
    const double len = std::max(1.0, w);
    r2.grid = interior(e.eta - len, e.eta, opt.points);
    fill_equality(r2, [&](double x) { return 2.0 * u2(x) - u1(x); }, true, opt.tol);
    r2.off_grid = interior(e.eta, e.gamma + w, 2 * m);
    for (double x : r2.off_grid) {
        const double lhs = 2.0 * u2(x) - u1(x);
        const double ext = std::abs(lhs - log_ratio(x, 1));
        r2.max_extended_residual = std::max(r2.max_extended_residual, ext);
        r2.margins.push_back(lhs);
        if (ext > opt.tol || lhs < -opt.tol) r2.violations.push_back(x);
    }
    r2.min_inequality_margin = *std::min_element(r2.margins.begin(), r2.margins.end());
    return {std::move(r1), std::move(r2)};
}

std::pair<VariationalReport, VariationalReport> check_variational_nu(const ScaledParams& sp, double xi,
                                                                     const VariationalOptions& opt) {
    require(xi > 0.0, "check_variational_nu: xi must be positive");
    require(opt.points >= 3, "check_variational_nu: need at least three points");
    const auto g1 = interpolated(nu1_grid(sp, xi), opt.interp_nodes);
    const auto g2 = interpolated(nu2_grid(sp, xi), opt.interp_nodes);
    const double lo = g1.lower();
    const double hi = g1.upper();
    const double eta = edge_curves(sp, xi).eta;
    const double e0 = sp.sigma_edge();
    auto u1 = [&](double x) { return log_potential(g1, x); };
    auto u2 = [&](double x) { return log_potential(g2, x); };
    const std::size_t m = std::max<std::size_t>(opt.off_points / 2, 1);

    VariationalReport r1;
    r1.grid = interior(lo, hi, opt.points);
    auto lhs1 = [&](double x) { return 2.0 * u1(x) - u2(x) - V_closed(sp, x) / xi; };
    fill_equality(r1, lhs1, false, opt.tol);
    if (lo > 0.0) append(r1.off_grid, interior(0.0, lo, m));
    append(r1.off_grid, interior(hi, 2.0 * hi, m));
    fill_margins(r1, [&](double x) { return r1.ell - lhs1(x); }, opt.tol);

    VariationalReport r2;
    const double len = std::max(1.0, hi - lo);
    r2.grid = interior(eta - len, eta, opt.points);
    auto lhs2 = [&](double x) { return 2.0 * u2(x) - u1(x); };
    fill_equality(r2, lhs2, true, opt.tol);
    r2.off_grid = interior(eta, hi, 2 * m);
    fill_margins(r2, lhs2, opt.tol);

    // xi nu2 = sigma is expected on (eta, e0) and nowhere below eta.
    const double span = 1.0 + std::abs(e0);
    auto contact = [&](double x) { return xi * nu2_density(sp, xi, x) >= (1.0 - 1e-5) * sigma_closed(sp, x); };
    if (eta < e0) {
        r2.constraint_active = true;
        for (double x : interior(eta, e0, 5)) {
            if (!contact(x)) {
                r2.constraint_active = false;
                r2.violations.push_back(x);
            }
        }
    }
    for (double f : {1e-3, 1e-2, 1e-1}) {
        const double x = e0 - f * span;
        if (x < eta - 1e-3 * span && contact(x)) r2.violations.push_back(x);
    }
    return {std::move(r1), std::move(r2)};
}

double mutual_energy(const DensityGrid& a, const DensityGrid& b) {
    const auto br = piece_ends(b);
    return -integrate_against(a, [&b](double x) { return log_potential(b, x); }, br, outer_options());
}

double energy_with_field(const DensityGrid& nu1, const DensityGrid& nu2,
                         const std::function<double(double)>& field, double xi) {
    require(xi > 0.0, "energy: xi must be positive");
    return mutual_energy(nu1, nu1) + mutual_energy(nu2, nu2) - mutual_energy(nu1, nu2) +
           integrate_against(nu1, field, {}, outer_options()) / xi;
}

double energy(const DensityGrid& nu1, const DensityGrid& nu2, const ScaledParams& sp, double xi) {
    require(std::abs(total_mass(nu1) - 1.0) <= 1e-5, "energy: nu1 must have unit mass");
    require(std::abs(total_mass(nu2) - 0.5) <= 1e-5, "energy: nu2 must have mass 1/2");
    return energy_with_field(nu1, nu2, [&sp](double x) { return V_closed(sp, std::max(x, 0.0)); }, xi);
}

std::vector<ProbeResult> minimality_probes(const ScaledParams& sp, double xi, std::size_t count, double eps,
                                           std::uint64_t seed, std::size_t interp_nodes) {
    require(eps > 0.0 && eps < 1.0, "minimality_probes: eps must lie in (0, 1)");
    std::array<DensityGrid, 4> m{interpolated(nu1_grid(sp, xi), interp_nodes),
                                 interpolated(nu2_grid(sp, xi), interp_nodes), {}, {}};
    auto field = [&sp](double x) { return V_closed(sp, std::max(x, 0.0)); };
    std::array<std::array<double, 4>, 4> M{};
    std::array<double, 4> v{};
    M[0][0] = mutual_energy(m[0], m[0]);
    M[1][1] = mutual_energy(m[1], m[1]);
    M[0][1] = M[1][0] = mutual_energy(m[0], m[1]);
    v[0] = integrate_against(m[0], field, {}, outer_options());

    auto value = [&](double e) {
        const std::array<double, 4> c1{1.0 - e, 0.0, e, 0.0};
        const std::array<double, 4> c2{0.0, 1.0 - e, 0.0, e};
        double q = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) q += M[i][j] * (c1[i] * c1[j] + c2[i] * c2[j] - c1[i] * c2[j]);
        }
        return q + (c1[0] * v[0] + c1[2] * v[2]) / xi;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double top = 2.0 * edge_curves(sp, xi).gamma;
    const double e0 = sp.sigma_edge();
    std::vector<ProbeResult> out;
    for (std::size_t k = 0; k < count; ++k) {
        double a = unif(rng) * top;
        double b = unif(rng) * top;
        if (a > b) std::swap(a, b);
        if (b - a < 0.05 * top) b = std::min(top, a + 0.05 * top), a = b - 0.05 * top;
        m[2] = uniform_grid(a, b);
        m[3] = sigma_slab(sp, xi, e0 - (0.01 + 0.49 * unif(rng)) * (1.0 + std::abs(e0)));
        for (int i = 0; i < 4; ++i) {
            for (int j = 2; j < 4; ++j) {
                if (i > j) continue;
                M[i][j] = M[j][i] = mutual_energy(m[i], m[j]);
            }
        }
        v[2] = integrate_against(m[2], field, {}, outer_options());
        out.push_back({eps, value(0.0), value(eps)});
    }
    return out;
}

}  // namespace besq
