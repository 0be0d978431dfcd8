#pragma once

// Adaptive Gauss-Kronrod (G10/K21) quadrature with a global error heap.
//
// Endpoint singularities are the caller's job: every integral in this
// library is first mapped so that square-root edges and |x|^{-1/2}
// hard edges become smooth (see the substitution helpers at the bottom).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "besq/error.hpp"

namespace besq::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 11> kronrod_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

inline constexpr std::array<double, 11> kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067587532, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for kronrod_nodes[1], [3], [5], [7], [9].
inline constexpr std::array<double, 5> gauss_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kronrod_weights[10];
    double gauss = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const double dx = half * kronrod_nodes[i];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[i] * sum;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

// Integrates f over [a, b]. f is never evaluated at the endpoints.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    Result res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<detail::Panel> heap;
    auto first = detail::gk21(f, a, b);
    res.evaluations = 21;
    double total = first.value;
    double error = first.error;
    heap.push(first);
    while (true) {
        const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (error <= target) {
            res.converged = true;
            break;
        }
        if (heap.size() >= opt.max_intervals) break;
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;  // interval exhausted
        heap.pop();
        auto left = detail::gk21(f, worst.a, mid);
        auto right = detail::gk21(f, mid, worst.b);
        res.evaluations += 42;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    res.value = total;
    res.error = error;
    return res;
}

// Same as integrate() but throws NonConvergence when the tolerance is missed.
template <class F>
double integrate_or_throw(F&& f, double a, double b, const Options& opt, const char* what) {
    auto r = integrate(std::forward<F>(f), a, b, opt);
    if (!r.converged) {
        throw NonConvergence(std::string(what) + ": quadrature did not converge (estimate " +
                             std::to_string(r.value) + ", error " + std::to_string(r.error) + ")");
    }
    return r.value;
}

// ---- substitutions -------------------------------------------------------

// x = lo + (hi - lo)(1 - cos th)/2, th in [0, pi]. Square-root vanishing or
// |x - edge|^{-1/2} behaviour at either end becomes smooth in th.
template <class F>
Result integrate_cos_map(F&& f, double lo, double hi, const Options& opt = {}) {
    const double half = 0.5 * (hi - lo);
    auto g = [&](double th) {
        const double x = lo + half * (1.0 - std::cos(th));
        return f(x) * half * std::sin(th);
    };
    return integrate(g, 0.0, M_PI, opt);
}

// x = edge - scale * tan(th)^2, th in [0, pi/2): maps (-inf, edge] to a
// finite interval. Integrands with |x|^{-3/2} tails become bounded.
template <class F>
Result integrate_lower_tail(F&& f, double edge, double scale, const Options& opt = {}) {
    auto g = [&](double th) {
        const double tn = std::tan(th);
        const double c = std::cos(th);
        const double x = edge - scale * tn * tn;
        return f(x) * 2.0 * scale * tn / (c * c);
    };
    return integrate(g, 0.0, 0.5 * M_PI, opt);
}

}  // namespace besq::quad
