#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>
#include <variant>

#include "besq/acceptance.hpp"
#include "besq/bessel_sim.hpp"
#include "besq/equilibrium.hpp"
#include "besq/error.hpp"
#include "besq/measures.hpp"
#include "besq/model.hpp"
#include "besq/polyzeros.hpp"
#include "besq/symbol.hpp"

using namespace besq;
using json = nlohmann::json;

namespace {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Config {
    double a = 1.0;
    double t = 0.2;
    double p = 0.0;
    double xi = 1.0;
    double s = 1.0;
    double s_max = 6.0;
    double alpha = 0.0;
    double horizon = 1.0;
    std::size_t n = 100;
    std::size_t k = 0;
    std::size_t grid = 400;
    std::size_t steps = 200;
    std::size_t replicas = 1;
    std::uint64_t seed = 0;
    std::string kind = "scaled";
    std::string measure = "nu1";
    std::string format = "csv";
    std::string out;
};

void put_number(std::ostream& os, double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    os.write(buf, r.ptr - buf);
}

void write_table(std::ostream& os, const Table& tab, const std::string& format) {
    if (format == "json") {
        json rows = json::array();
        for (const auto& r : tab.rows) {
            json row = json::array();
            for (const auto& c : r) {
                if (const double* d = std::get_if<double>(&c)) {
                    row.push_back(std::isfinite(*d) ? json(*d) : json(nullptr));
                } else {
                    row.push_back(std::get<std::string>(c));
                }
            }
            rows.push_back(std::move(row));
        }
        os << json{{"columns", tab.columns}, {"rows", rows}}.dump() << '\n';
        return;
    }
    for (std::size_t i = 0; i < tab.columns.size(); ++i) os << (i ? "," : "") << tab.columns[i];
    os << '\n';
    for (const auto& r : tab.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ',';
            if (const double* d = std::get_if<double>(&r[i])) {
                put_number(os, *d);
            } else {
                os << std::get<std::string>(r[i]);
            }
        }
        os << '\n';
    }
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    return x;
}

Table coeffs_table(const Config& c) {
    Table tab;
    if (c.kind == "limit") {
        const ScaledParams sp(c.a, c.t, c.p);
        tab.columns = {"s", "b", "c", "d"};
        for (double s : uniform_grid(0.0, c.s_max, c.grid)) {
            const auto q = limit_coeffs(sp, s);
            tab.rows.push_back({s, q.b, q.c, q.d});
        }
        return tab;
    }
    const std::size_t kmax = c.k ? c.k : c.n;
    tab.columns = {"k", "b", "c", "d"};
    if (c.kind == "finite") {
        const FiniteParams fp{c.a, c.alpha, c.t, c.horizon};
        fp.validate();
        for (std::size_t k = 0; k <= kmax; ++k) {
            const auto q = recurrence_coeffs_finite(fp, static_cast<long>(k));
            tab.rows.push_back({static_cast<double>(k), q.b, q.c, q.d});
        }
    } else if (c.kind == "scaled") {
        const ScaledParams sp(c.a, c.t, c.p);
        for (std::size_t k = 0; k <= kmax; ++k) {
            const auto q = recurrence_coeffs_scaled(sp, static_cast<long>(k), static_cast<long>(c.n));
            tab.rows.push_back({static_cast<double>(k), q.b, q.c, q.d});
        }
    } else {
        throw ValidationError("coeffs: kind must be finite, scaled or limit");
    }
    return tab;
}

Table zeros_table(const Config& c) {
    const ScaledParams sp(c.a, c.t, c.p);
    const std::size_t k = c.k ? c.k : c.n;
    const auto rec = Recurrence::scaled(sp, c.n, k + 1);
    const auto zs = zeros_interlaced(rec, k);
    const double xi = static_cast<double>(k) / static_cast<double>(c.n);
    Table tab;
    tab.columns = {"index", "zero", "empirical_cdf", "nu1_cdf"};
    for (std::size_t i = 0; i < zs.zeros.size(); ++i) {
        const double x = zs.zeros[i];
        tab.rows.push_back({static_cast<double>(i), x, static_cast<double>(i + 1) / static_cast<double>(k),
                            nu1_cdf(sp, xi, x)});
    }
    return tab;
}

Table edges_table(const Config& c) {
    const ScaledParams sp(c.a, c.t, c.p);
    Table tab;
    tab.columns = {"s", "beta", "gamma", "eta"};
    for (double s : uniform_grid(0.0, c.s_max, c.grid)) {
        const auto e = edge_curves(sp, s);
        tab.rows.push_back({s, e.beta, e.gamma, e.eta});
    }
    return tab;
}

Table density_table(const Config& c) {
    DensityGrid g;
    bool averaged = false;
    if (c.measure == "mp") {
        g = mp_grid(c.t, c.p);
    } else {
        const ScaledParams sp(c.a, c.t, c.p);
        if (c.measure == "mu1") {
            g = mu1_grid(sp, c.s);
        } else if (c.measure == "mu2") {
            g = mu2_grid(sp, c.s);
        } else if (c.measure == "nu1") {
            g = nu1_grid(sp, c.xi);
            averaged = true;
        } else if (c.measure == "nu2") {
            g = nu2_grid(sp, c.xi);
            averaged = true;
        } else if (c.measure == "sigma") {
            g = sigma_grid(sp);
        } else {
            throw ValidationError("density: measure must be mu1, mu2, nu1, nu2, sigma or mp");
        }
    }
    const std::size_t per_piece = std::max<std::size_t>(2, c.grid / g.pieces.size());
    DensityGrid cum = averaged ? interpolated(g) : g;
    tabulate(cum, per_piece);
    Table tab;
    tab.columns = {"x", "density", "cumulative", "mass"};
    double prev = 0.0;
    for (std::size_t i = 0; i < cum.nodes.size(); ++i) {
        const double x = cum.nodes[i];
        const double f = cum.cumulative[i];
        double m = f - prev;
        if (i + 1 == cum.nodes.size() && std::isfinite(g.mass)) m += g.mass - f;
        prev = f;
        tab.rows.push_back({x, averaged ? g.density(x) : cum.values[i], f, m});
    }
    return tab;
}

Table field_table(const Config& c) {
    const ScaledParams sp(c.a, c.t, c.p);
    const double top = 2.0 * edge_curves(sp, 1.0).gamma;
    Table tab;
    tab.columns = {"x", "V_closed", "V_numeric"};
    for (double x : uniform_grid(0.0, top, c.grid)) tab.rows.push_back({x, V_closed(sp, x), V_numeric(sp, x)});
    return tab;
}

Table varcheck_table(const Config& c, json& summary) {
    const ScaledParams sp(c.a, c.t, c.p);
    const auto mu = check_variational_mu(sp, c.s);
    const auto nu = check_variational_nu(sp, c.xi);
    Table tab;
    tab.columns = {"level", "condition", "region", "x", "value"};
    auto add = [&](const char* level, int cond, const VariationalReport& r) {
        for (std::size_t i = 0; i < r.grid.size(); ++i) tab.rows.push_back({level, std::to_string(cond), "equality", r.grid[i], r.residuals[i]});
        for (std::size_t i = 0; i < r.off_grid.size(); ++i) tab.rows.push_back({level, std::to_string(cond), "inequality", r.off_grid[i], r.margins[i]});
        summary[level][std::to_string(cond)] = {{"ell", r.ell},
                                                {"max_equality_residual", r.max_equality_residual},
                                                {"min_inequality_margin", r.min_inequality_margin},
                                                {"max_extended_residual", r.max_extended_residual},
                                                {"constraint_active", r.constraint_active},
                                                {"violations", r.violations}};
    };
    add("mu", 1, mu.first);
    add("mu", 2, mu.second);
    add("nu", 1, nu.first);
    add("nu", 2, nu.second);
    return tab;
}

Table toeplitz_table(const Config& c) {
    const ScaledParams sp(c.a, c.t, c.p);
    const auto ev = toeplitz_spectrum(sp, c.s, c.n);
    Table tab;
    tab.columns = {"index", "re", "im"};
    for (std::size_t i = 0; i < ev.size(); ++i) tab.rows.push_back({static_cast<double>(i), ev[i].real(), ev[i].imag()});
    return tab;
}

unsigned thread_count() {
    if (const char* env = std::getenv("BESQ_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::string& command, const Config& c, std::ostream& os) {
    if (command == "simulate") {
        const long alpha = std::lround(c.p * static_cast<double>(c.n));
        const auto runs = simulate_replicas(c.n, alpha, c.a, SimConfig{c.steps, c.seed, c.replicas}, thread_count());
        write_csv(os, runs);
        return 0;
    }
    if (command == "accept") {
        const auto results = run_all_criteria();
        bool all = true;
        Table tab;
        tab.columns = {"criterion", "name", "status", "seconds", "detail"};
        for (const auto& r : results) {
            all = all && r.passed;
            tab.rows.push_back({static_cast<double>(r.id), r.name, r.passed ? "PASS" : "FAIL", r.seconds, r.detail});
            if (c.format != "json") {
                std::fprintf(stderr, "%s %2d %s: %s [%.1fs]\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                             r.detail.c_str(), r.seconds);
            }
        }
        if (c.format == "json") write_table(os, tab, c.format);
        return all ? 0 : 1;
    }
    json summary;
    Table tab;
    if (command == "coeffs") tab = coeffs_table(c);
    else if (command == "zeros") tab = zeros_table(c);
    else if (command == "edges") tab = edges_table(c);
    else if (command == "density") tab = density_table(c);
    else if (command == "field") tab = field_table(c);
    else if (command == "varcheck") tab = varcheck_table(c, summary);
    else if (command == "toeplitz") tab = toeplitz_table(c);
    if (command == "varcheck" && c.format == "json") {
        os << json{{"summary", summary}}.dump() << '\n';
    }
    write_table(os, tab, c.format);
    return 0;
}

void report_error(const Config& c, const char* type, const std::string& msg) {
    if (c.format == "json") {
        std::cout << json{{"error", {{"type", type}, {"message", msg}}}}.dump() << '\n';
    } else {
        std::cerr << "error: " << msg << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-intersecting squared Bessel paths: recurrences, zeros, limit measures, simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    Config c;
    app.add_option("--a", c.a, "Start position a > 0");
    app.add_option("--t", c.t, "Time t in (0, 1)");
    app.add_option("--p", c.p, "alpha / n >= 0");
    app.add_option("--xi", c.xi, "Averaging end point xi > 0");
    app.add_option("--s", c.s, "Ratio s = k / n");
    app.add_option("--n", c.n, "Degree scale n");
    app.add_option("--k", c.k, "Degree k (default n)");
    app.add_option("--grid", c.grid, "Number of grid nodes");
    app.add_option("--seed", c.seed, "Random seed");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", c.out, "Output file (default stdout)");

    auto* coeffs = app.add_subcommand("coeffs", "Recurrence coefficient tables");
    coeffs->add_option("kind", c.kind, "finite, scaled or limit")->check(CLI::IsMember({"finite", "scaled", "limit"}));
    coeffs->add_option("--alpha", c.alpha, "Bessel order (finite)");
    coeffs->add_option("--T", c.horizon, "End time T (finite)");
    coeffs->add_option("--s-max", c.s_max, "Upper end of the s grid (limit)");
    app.add_subcommand("zeros", "Zeros of B_{k,n} with empirical and limiting CDF");
    app.add_subcommand("edges", "beta, gamma, eta over an s grid")->add_option("--s-max", c.s_max, "Upper end of the s grid");
    app.add_subcommand("density", "Density table of a limit measure")
        ->add_option("measure", c.measure, "mu1, mu2, nu1, nu2, sigma or mp")
        ->check(CLI::IsMember({"mu1", "mu2", "nu1", "nu2", "sigma", "mp"}));
    app.add_subcommand("field", "External field V, closed form and quadrature");
    app.add_subcommand("varcheck", "Variational condition residuals");
    app.add_subcommand("toeplitz", "Spectrum of the n x n Toeplitz matrix of the symbol at s");
    auto* sim = app.add_subcommand("simulate", "Non-intersecting paths, CSV");
    sim->add_option("--steps", c.steps, "Time steps");
    sim->add_option("--replicas", c.replicas, "Number of replicas");
    app.add_subcommand("accept", "Run the acceptance criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (c.out.empty()) return run(command, c, std::cout);
        std::ofstream file(c.out);
        if (!file) throw ValidationError("cannot open " + c.out);
        return run(command, c, file);
    } catch (const ValidationError& e) {
        report_error(c, "validation", e.what());
        return 2;
    } catch (const Error& e) {
        report_error(c, "numerical", e.what());
        return 3;
    }
}
