#include "besq/polyzeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "besq/error.hpp"
#include "besq/symbol.hpp"

namespace besq {

using cplx = std::complex<double>;

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> atoms) : atoms_(std::move(atoms)) {
    require(!atoms_.empty(), "EmpiricalMeasure: no atoms");
    std::sort(atoms_.begin(), atoms_.end());
}

double EmpiricalMeasure::cdf(double x) const {
    const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
    return static_cast<double>(it - atoms_.begin()) / static_cast<double>(atoms_.size());
}

double kolmogorov_distance(const EmpiricalMeasure& emp, const std::function<double(double)>& cdf) {
    const auto& a = emp.atoms();
    const double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double f = cdf(a[i]);
        d = std::max({d, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
    }
    return d;
}

namespace {

struct Signed {
    int sign;
    double log_abs;
};

Signed value_at(const Recurrence& rec, std::size_t k, double x) {
    try {
        const auto v = eval_poly(rec, k, x);
        return {v.sign, v.log_abs};
    } catch (const ZeroHit&) {
        return {0, -std::numeric_limits<double>::infinity()};
    }
}

// Illinois iteration on a sign-change bracket; f is carried as (sign, log|f|).
double bracket_root(const Recurrence& rec, std::size_t k, double lo, double hi, Signed flo, Signed fhi,
                    double tol) {
    int side = 0;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double x = lo + (hi - lo) / (1.0 + std::exp(fhi.log_abs - flo.log_abs));
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        // Keep the bracket shrinking geometrically.
        if (it % 8 == 7) x = 0.5 * (lo + hi);
        const Signed fx = value_at(rec, k, x);
        if (fx.sign == 0) return x;
        if (fx.sign == flo.sign) {
            lo = x;
            flo = fx;
            if (side == -1) fhi.log_abs -= M_LN2;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == 1) flo.log_abs -= M_LN2;
            side = 1;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ZeroSet next_zero_set(const Recurrence& rec, const ZeroSet& prev, double radius) {
    const std::size_t k = prev.k + 1;
    std::vector<double> ends;
    ends.reserve(k + 1);
    ends.push_back(-radius);
    ends.insert(ends.end(), prev.zeros.begin(), prev.zeros.end());
    ends.push_back(radius);
    std::vector<Signed> vals(ends.size());
    for (std::size_t i = 0; i < ends.size(); ++i) {
        vals[i] = value_at(rec, k, ends[i]);
        if (vals[i].sign == 0) {
            // Shared zero with P_{k-1}: nudge off the bracket end.
            ends[i] += 1e-14 * radius * (i + 1 < ends.size() ? 1.0 : -1.0);
            vals[i] = value_at(rec, k, ends[i]);
        }
    }
    const double tol = 1e-12 * radius;
    ZeroSet out;
    out.k = k;
    out.radius = radius;
    out.zeros.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (vals[i].sign == 0 || vals[i + 1].sign == 0 || vals[i].sign == vals[i + 1].sign) {
            throw InterlacingViolation("no sign change of P_" + std::to_string(k) + " on (" +
                                       std::to_string(ends[i]) + ", " + std::to_string(ends[i + 1]) + ")");
        }
        out.zeros.push_back(bracket_root(rec, k, ends[i], ends[i + 1], vals[i], vals[i + 1], tol));
    }
    return out;
}

void zero_sweep(const Recurrence& rec, std::size_t k_max,
                const std::function<void(const ZeroSet&)>& visit) {
    require(k_max >= 1 && k_max <= rec.size(), "zero_sweep: degree out of range");
    const double radius = zero_bound(rec, k_max);
    ZeroSet zs;
    zs.k = 0;
    zs.radius = radius;
    for (std::size_t k = 1; k <= k_max; ++k) {
        zs = next_zero_set(rec, zs, radius);
        visit(zs);
    }
}

ZeroSet zeros_interlaced(const Recurrence& rec, std::size_t k) {
    ZeroSet last;
    zero_sweep(rec, k, [&](const ZeroSet& zs) {
        if (zs.k == k) last = zs;
    });
    return last;
}

bool verify_interlacing(const ZeroSet& zs_k, const ZeroSet& zs_k1) {
    const auto& x = zs_k.zeros;
    const auto& y = zs_k1.zeros;
    if (y.size() != x.size() + 1) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(y[j] < x[j] && x[j] < y[j + 1])) return false;
    }
    return true;
}

double ratio_asymptotics_check(const ScaledParams& sp, double x, std::size_t n) {
    require(n >= 1, "ratio_asymptotics_check: n must be positive");
    const Recurrence rec = Recurrence::scaled(sp, n, n + 1);
    require(std::abs(x) > zero_bound(rec, n), "ratio_asymptotics_check: need |x| > R");
    const auto num = eval_poly(rec, n + 1, x);
    const auto den = eval_poly(rec, n, x);
    const double ratio = num.sign * den.sign * std::exp(num.log_abs - den.log_abs);
    const cplx z1 = solve_symbol(sp, 1.0, cplx(x)).z[0];
    return std::abs(ratio - z1);
}

// ---- Aberth-Ehrlich ------------------------------------------------------

namespace {

// Simultaneous iteration; ratio(z) returns p(z)/p'(z).
template <class Ratio>
std::vector<cplx> aberth(std::size_t deg, cplx center, double radius, Ratio ratio,
                         std::size_t max_sweeps, bool& converged, double abs_floor = 1e-300) {
    std::vector<cplx> z(deg);
    for (std::size_t k = 0; k < deg; ++k) {
        const double th = 2.0 * M_PI * k / deg + 0.4;
        z[k] = center + radius * std::polar(1.0, th);
    }
    std::vector<bool> done(deg, false);
    converged = false;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool all = true;
        for (std::size_t k = 0; k < deg; ++k) {
            if (done[k]) continue;
            const cplx n = ratio(z[k]);
            if (!std::isfinite(n.real()) || !std::isfinite(n.imag())) {
                done[k] = true;  // landed on a root exactly
                continue;
            }
            cplx sum = 0.0;
            for (std::size_t j = 0; j < deg; ++j) {
                if (j != k) sum += 1.0 / (z[k] - z[j]);
            }
            const cplx w = n / (1.0 - n * sum);
            z[k] -= w;
            if (std::abs(w) <= std::max(1e-15 * std::abs(z[k]), abs_floor)) {
                done[k] = true;
            } else {
                all = false;
            }
        }
        if (all) {
            converged = true;
            break;
        }
    }
    return z;
}

}  // namespace

std::vector<cplx> aberth_roots(std::span<const cplx> coeffs) {
    require(coeffs.size() >= 2, "aberth_roots: degree must be at least 1");
    const std::size_t deg = coeffs.size() - 1;
    require(deg <= 512, "aberth_roots: degree exceeds 512");
    require(coeffs[deg] != cplx(0.0), "aberth_roots: leading coefficient is zero");
    if (deg == 1) return {-coeffs[0] / coeffs[1]};
    auto horner = [&](cplx z, cplx& p, cplx& dp) {
        p = coeffs[deg];
        dp = 0.0;
        for (std::size_t j = deg; j-- > 0;) {
            dp = dp * z + p;
            p = p * z + coeffs[j];
        }
    };
    auto ratio = [&](cplx z) {
        cplx p, dp;
        horner(z, p, dp);
        return p / dp;
    };
    // Fujiwara-type bound for the starting circle.
    double radius = 0.0;
    for (std::size_t j = 0; j < deg; ++j) {
        radius = std::max(radius, std::pow(std::abs(coeffs[j] / coeffs[deg]), 1.0 / (deg - j)));
    }
    const cplx center = -coeffs[deg - 1] / (static_cast<double>(deg) * coeffs[deg]);
    bool converged = false;
    auto z = aberth(deg, center, std::max(radius, 1e-3), ratio, 200, converged);
    double cmax = 0.0;
    for (auto c : coeffs) cmax = std::max(cmax, std::abs(c));
    for (auto r : z) {
        cplx p, dp;
        horner(r, p, dp);
        const double bound = 1e-10 * cmax * std::pow(std::max(1.0, std::abs(r)), static_cast<double>(deg));
        if (!(std::abs(p) <= bound) && !converged) {
            throw NonConvergence("aberth_roots: no convergence after 200 sweeps");
        }
    }
    return z;
}

std::vector<cplx> aberth_roots(std::span<const double> coeffs) {
    std::vector<cplx> c(coeffs.begin(), coeffs.end());
    return aberth_roots(std::span<const cplx>(c));
}

std::vector<cplx> toeplitz_spectrum(const ScaledParams& sp, double s, std::size_t n) {
    require(n >= 1 && n <= 512, "toeplitz_spectrum: n must be in [1, 512]");
    const CoeffTriple c = limit_coeffs(sp, s);
    if (n == 1) return {cplx(c.b)};
    const Recurrence rec = Recurrence::constant(c, n);
    auto ratio = [&](cplx z) { return newton_ratio(rec, n, z); };
    const double radius = 0.5 * zero_bound(rec, n);
    bool converged = false;
    auto z = aberth(n, cplx(c.b), radius, ratio, 500, converged, 1e-14 * radius);
    if (!converged) throw NonConvergence("toeplitz_spectrum: Aberth iteration did not converge");
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return z;
}

double hausdorff_to_interval(std::span<const cplx> pts, double lo, double hi) {
    require(!pts.empty() && lo <= hi, "hausdorff_to_interval: bad input");
    double out = 0.0;
    for (auto z : pts) {
        const double x = std::clamp(z.real(), lo, hi);
        out = std::max(out, std::abs(z - x));
    }
    // Farthest interval point from the set: check ends and midpoints of gaps in real parts.
    std::vector<double> re;
    for (auto z : pts) re.push_back(std::clamp(z.real(), lo, hi));
    std::sort(re.begin(), re.end());
    auto dist_set = [&](double x) {
        double d = std::numeric_limits<double>::infinity();
        for (auto z : pts) d = std::min(d, std::abs(z - x));
        return d;
    };
    out = std::max({out, dist_set(lo), dist_set(hi)});
    for (std::size_t i = 0; i + 1 < re.size(); ++i) out = std::max(out, dist_set(0.5 * (re[i] + re[i + 1])));
    return out;
}

}  // namespace besq
