#include "besq/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "besq/bessel_sim.hpp"
#include "besq/equilibrium.hpp"
#include "besq/error.hpp"
#include "besq/measures.hpp"
#include "besq/model.hpp"
#include "besq/polyzeros.hpp"
#include "besq/symbol.hpp"

namespace besq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::array<ScaledParams, 3> kSets{ScaledParams(1, 0.2, 0), ScaledParams(1, 0.9, 0), ScaledParams(1, 0.3, 5)};

template <class... Args>
std::string format(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string tag(const ScaledParams& sp) { return format("(%g,%g,%g)", sp.a(), sp.t(), sp.p()); }

struct Verdict {
    bool ok = true;
    std::string detail;

    void add(bool pass, const std::string& what) {
        ok = ok && pass;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return x;
}

Verdict field_closed_vs_numeric() {
    Verdict v;
    for (const auto& sp : kSets) {
        const double top = 2.0 * edge_curves(sp, 1.0).gamma;
        double worst = 0.0;
        // Interior points: V(0) is infinite when p > 0.
        for (std::size_t i = 0; i < 50; ++i) {
            const double x = top * (static_cast<double>(i) + 0.5) / 50.0;
            worst = std::max(worst, std::abs(V_closed(sp, x) - V_numeric(sp, x)));
        }
        v.add(worst <= 1e-6, tag(sp) + format(" max|dV|=%.2e", worst));
    }
    return v;
}

Verdict sigma_closed_vs_numeric() {
    Verdict v;
    for (const auto& sp : kSets) {
        const double e0 = sp.sigma_edge();
        const double lo = std::min(edge_curves(sp, 3.0).eta, e0 - 1.0);
        double worst = 0.0;
        for (double x : linspace(lo, e0 - 0.05, 50)) {
            const double c = sigma_closed(sp, x);
            worst = std::max(worst, std::abs(sigma_numeric(sp, x) - c) / c);
        }
        v.add(worst <= 1e-6, tag(sp) + format(" max rel=%.2e on [%.4g,%.4g]", worst, lo, e0 - 0.05));
    }
    return v;
}

Verdict edge_cross_oracle() {
    Verdict v;
    for (const auto& sp : kSets) {
        const auto e = edge_curves(sp, 1.0);
        const auto b = boundary_cubic(sp);
        const double d = std::max({std::abs(e.beta - b.beta), std::abs(e.gamma - b.gamma),
                                   sp.p() > 0.0 ? std::abs(e.eta - b.eta) : 0.0});
        v.add(d <= 1e-9, tag(sp) + format(" |edges-cubic|=%.1e", d));
    }
    const auto e = edge_curves(ScaledParams(1, 0.5, 0), 1.0);
    const bool lit = std::abs(e.beta) <= 1e-9 && std::abs(e.gamma - 0.4375) <= 1e-9;
    v.add(lit, format("(1,0.5,0) (beta,gamma)=(%.6g,%.6g), expected (0,0.4375)", e.beta, e.gamma));
    return v;
}

Verdict masses() {
    Verdict v;
    double worst = 0.0;
    std::string where;
    for (const auto& sp : kSets) {
        for (double s : {0.5, 1.0, 2.0}) {
            const std::array<std::pair<const char*, double>, 4> got{
                std::pair{"mu1", total_mass(mu1_grid(sp, s)) - 1.0}, std::pair{"mu2", total_mass(mu2_grid(sp, s)) - 0.5},
                std::pair{"nu1", total_mass(nu1_grid(sp, s)) - 1.0}, std::pair{"nu2", total_mass(nu2_grid(sp, s)) - 0.5}};
            for (const auto& [name, err] : got) {
                if (std::abs(err) >= worst) {
                    worst = std::abs(err);
                    where = tag(sp) + format(" %s at %g", name, s);
                }
            }
        }
    }
    v.add(worst <= 1e-5, format("max mass error %.2e (", worst) + where + ")");
    return v;
}

Verdict stieltjes() {
    Verdict v;
    double worst = 0.0;
    for (const auto& sp : kSets) {
        for (double s : {0.5, 1.0, 2.0}) {
            const auto e = edge_curves(sp, s);
            const double w = e.gamma - e.beta;
            const double mid = 0.5 * (e.beta + e.gamma);
            const std::array<cplx, 10> pts{cplx(e.gamma + 0.1 * w),  cplx(e.gamma + w),          cplx(e.gamma + 5 * w),
                                           cplx(mid, 0.3 * w),       cplx(mid, -0.3 * w),        cplx(e.beta, 0.2),
                                           cplx(e.gamma, 1.0),       cplx(-1.0, 0.5),            cplx(-2.0, 2.0),
                                           cplx(0.0, 10.0)};
            for (const auto z : pts) {
                const auto c = mu1_stieltjes_closed(sp, s, z);
                worst = std::max(worst, std::abs(mu1_stieltjes(sp, s, z) - c) / std::abs(c));
            }
        }
    }
    v.add(worst <= 1e-6, format("max relative deviation %.2e over 90 points", worst));
    return v;
}

Verdict zero_distribution() {
    Verdict v;
    for (const auto& sp : kSets) {
        std::array<double, 3> dist{};
        const std::array<std::size_t, 3> ns{100, 200, 400};
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const auto rec = Recurrence::scaled(sp, ns[i], ns[i] + 1);
            const EmpiricalMeasure emp(zeros_interlaced(rec, ns[i]).zeros);
            dist[i] = kolmogorov_distance(emp, [&sp](double x) { return nu1_cdf(sp, 1.0, x); });
        }
        v.add(dist[1] <= 0.05 && dist[1] < dist[0] && dist[2] < dist[1],
              tag(sp) + format(" KS n=100,200,400: %.4f %.4f %.4f", dist[0], dist[1], dist[2]));
    }
    return v;
}

Verdict interlacing() {
    Verdict v;
    for (const auto& sp : kSets) {
        const auto rec = Recurrence::scaled(sp, 250, 500);
        ZeroSet prev;
        bool ok = true;
        double lowest = kInf;
        zero_sweep(rec, 499, [&](const ZeroSet& zs) {
            if (zs.k > 1) ok = ok && verify_interlacing(prev, zs);
            lowest = std::min(lowest, zs.zeros.front());
            prev = zs;
        });
        v.add(ok && lowest > 0.0, tag(sp) + format(" interlaced=%d min zero %.3e", ok ? 1 : 0, lowest));
    }
    return v;
}

Verdict toeplitz() {
    Verdict v;
    for (const auto& sp : kSets) {
        const auto e = edge_curves(sp, 1.0);
        std::vector<double> h;
        for (std::size_t n : {32, 64, 128, 256}) {
            h.push_back(hausdorff_to_interval(toeplitz_spectrum(sp, 1.0, n), e.beta, e.gamma));
        }
        const auto ev = toeplitz_spectrum(sp, 1.0, 256);
        double far = 0.0;
        for (const auto z : ev) {
            const double dx = std::max({e.beta - z.real(), z.real() - e.gamma, 0.0});
            far = std::max(far, std::hypot(dx, z.imag()));
        }
        const bool dec = h[1] < h[0] && h[2] < h[1] && h[3] < h[2];
        v.add(far <= 0.05 && dec,
              tag(sp) + format(" max dist %.3e, Hausdorff %.3f %.3f %.3f %.3f", far, h[0], h[1], h[2], h[3]));
    }
    return v;
}

Verdict variational() {
    Verdict v;
    const std::array<bool, 3> active{false, true, true};
    for (std::size_t i = 0; i < kSets.size(); ++i) {
        const auto& sp = kSets[i];
        const auto [m1, m2] = check_variational_mu(sp, 1.0);
        const double mu_res = std::max(m1.max_equality_residual, m2.max_equality_residual);
        const auto [n1, n2] = check_variational_nu(sp, 1.0);
        const double nu_res = std::max(n1.max_equality_residual, n2.max_equality_residual);
        const bool ok = m1.passed() && m2.passed() && mu_res <= 5e-5 && n1.passed() && n2.passed() &&
                        nu_res <= 1e-4 && n2.constraint_active == active[i];
        v.add(ok, tag(sp) + format(" mu %.1e nu %.1e constraint %s", mu_res, nu_res,
                                   n2.constraint_active ? "active" : "inactive"));
    }
    return v;
}

Verdict hard_edge() {
    Verdict v;
    const double b_low = edge_curves(ScaledParams(1, 0.2, 0), 1.0).beta;
    const ScaledParams sp(1, 0.9, 0);
    const double b_high = edge_curves(sp, 1.0).beta;
    const double d1 = 1e-4, d2 = 1e-6;
    const double slope = std::log(nu1_density(sp, 1.0, b_high + d2) / nu1_density(sp, 1.0, b_high + d1)) /
                         std::log(d2 / d1);
    v.add(b_low > 0.0, format("beta(1)=%.6g at t=0.2", b_low));
    v.add(std::abs(b_high) <= 1e-9, format("beta(1)=%.1e at t=0.9", b_high));
    v.add(std::abs(slope + 0.5) <= 0.05, format("exponent %.4f", slope));
    return v;
}

Verdict marchenko_pastur() {
    Verdict v;
    double edge_err = 0.0, mass_err = 0.0;
    for (double p : {0.0, 5.0}) {
        for (double t : {0.2, 0.5, 0.9}) {
            const auto e = edge_curves(ScaledParams(1e-6, t, p), 1.0);
            const auto m = mp_edges(t, p);
            edge_err = std::max({edge_err, std::abs(e.beta - m.rho1), std::abs(e.gamma - m.rho2)});
            mass_err = std::max(mass_err, std::abs(total_mass(mp_grid(t, p)) - 1.0));
        }
    }
    v.add(edge_err <= 1e-2, format("max edge deviation %.2e", edge_err));
    v.add(mass_err <= 1e-8, format("max mass error %.1e", mass_err));
    return v;
}

Verdict simulation() {
    Verdict v;
    for (long alpha : {0L, 2L}) {
        const auto runs = simulate_replicas(1, alpha, 1.0, SimConfig{10, 2024, 10000});
        const double horizon = runs[0].horizon();
        double worst = 0.0;
        for (std::size_t i = 1; i < 10; ++i) {
            const double u = runs[0].times[i];
            double m = 0.0, m2 = 0.0;
            for (const auto& r : runs) {
                m += r.positions[i][0];
                m2 += r.positions[i][0] * r.positions[i][0];
            }
            m /= static_cast<double>(runs.size());
            const double se = std::sqrt((m2 / static_cast<double>(runs.size()) - m * m) / static_cast<double>(runs.size()));
            const double expect =
                std::pow(1.0 - u / horizon, 2) + 2.0 * static_cast<double>(alpha + 1) * u * (horizon - u) / horizon;
            worst = std::max(worst, std::abs(m - expect) / se);
        }
        v.add(worst <= 3.0, format("n=1 alpha=%ld max |mean-exact|/se %.2f", alpha, worst));
    }
    const std::vector<double> taus{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const auto flat = envelope_check(simulate(50, 0, 1.0, SimConfig{200, 42, 1}), taus);
    const auto lifted = envelope_check(simulate(50, 250, 1.0, SimConfig{200, 42, 1}), taus);
    v.add(flat.max_outlier_fraction <= 0.08 && lifted.max_outlier_fraction <= 0.08,
          format("outliers p=0 %.3f p=5 %.3f", flat.max_outlier_fraction, lifted.max_outlier_fraction));
    double lift_ratio = kInf;
    for (const auto& r : lifted.rows) lift_ratio = std::min(lift_ratio, r.min_path / r.beta);
    v.add(lift_ratio >= 0.5, format("p=5 min path/beta >= %.3f", lift_ratio));
    const double t_star = ScaledParams(1, 0.5, 0).t_star();
    bool early_ok = true, late_low = false;
    double late_min = kInf;
    for (const auto& r : flat.rows) {
        if (r.tau <= t_star - 0.2) early_ok = early_ok && r.min_path >= 0.5 * r.beta;
        if (r.tau > t_star) {
            late_min = std::min(late_min, r.min_path);
            late_low = late_low || r.min_path < 0.02;
        }
    }
    v.add(early_ok && late_low, format("p=0 bounded away before t*-0.2: %d, min path after t* %.2e", early_ok ? 1 : 0,
                                       late_min));
    return v;
}

Verdict orthogonality() {
    Verdict v;
    double worst = 0.0;
    for (const FiniteParams& fp : {FiniteParams{1.0, 0.0, 0.5, 1.0}, FiniteParams{2.0, 1.5, 0.7, 2.0}}) {
        for (int n : {2, 4}) {
            for (int j : {1, 2}) {
                for (int k = 0; k < n / 2; ++k) worst = std::max(worst, check_orthogonality(fp, n, j, k));
            }
        }
    }
    v.add(worst <= 1e-6, format("max normalized residual %.2e", worst));
    return v;
}

struct Entry {
    const char* name;
    double budget;
    Verdict (*run)();
};

const std::array<Entry, kCriterionCount> kEntries{{
    {"external field closed form vs quadrature", 30, field_closed_vs_numeric},
    {"constraint density closed form vs quadrature", 30, sigma_closed_vs_numeric},
    {"edge curves vs boundary cubic", 1, edge_cross_oracle},
    {"mass normalizations", 120, masses},
    {"Stieltjes identity", 30, stieltjes},
    {"zero distribution convergence", 180, zero_distribution},
    {"interlacing", 120, interlacing},
    {"Toeplitz accumulation", 60, toeplitz},
    {"variational conditions", 300, variational},
    {"hard edge", 60, hard_edge},
    {"Marchenko-Pastur limit", 10, marchenko_pastur},
    {"simulation calibration", 300, simulation},
    {"orthogonality", 120, orthogonality},
}};

}  // namespace

CriterionResult run_criterion(int id) {
    require(id >= 1 && id <= kCriterionCount, "run_criterion: unknown criterion " + std::to_string(id));
    const auto& entry = kEntries[static_cast<std::size_t>(id - 1)];
    CriterionResult r;
    r.id = id;
    r.name = entry.name;
    r.budget_seconds = entry.budget;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = entry.run();
    } catch (const Error& e) {
        v.add(false, std::string("error: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.passed = v.ok && r.seconds <= r.budget_seconds;
    r.detail = v.detail;
    if (r.seconds > r.budget_seconds) r.detail += format("; runtime %.1fs over budget %.0fs", r.seconds, r.budget_seconds);
    return r;
}

std::vector<CriterionResult> run_all_criteria() {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id));
    return out;
}

}  // namespace besq
