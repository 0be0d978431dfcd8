#pragma once

// Logarithmic potentials U(x) = int log|x - y| dnu(y), energies, and checks of
// the Euler-Lagrange conditions for (mu_1^s, mu_2^s) and (nu_1^xi, nu_2^xi).

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "besq/measures.hpp"

namespace besq {

double log_potential(const DensityGrid& grid, double x);

struct VariationalReport {
    double ell = 0.0;  // median of the left-hand side on the equality set
    double max_equality_residual = 0.0;
    double min_inequality_margin = 0.0;  // >= 0 when the inequality holds
    double max_extended_residual = 0.0;  // mu level only
    bool constraint_active = false;      // nu level, second condition only
    std::vector<double> grid;
    std::vector<double> residuals;
    std::vector<double> off_grid;
    std::vector<double> margins;
    std::vector<double> violations;  // abscissae failing the tolerance

    bool passed() const { return violations.empty(); }
};

struct VariationalOptions {
    std::size_t points = 60;
    std::size_t off_points = 20;
    std::size_t interp_nodes = 128;
    double tol = 5e-5;
};

// First report: 2U^{mu1} - U^{mu2} = ell on Gamma_1(s), extended identity
// log|z1/z2| off it. Second: 2U^{mu2} - U^{mu1} = 0 on Gamma_2(s), log|z2/z3| off it.
std::pair<VariationalReport, VariationalReport> check_variational_mu(const ScaledParams& sp, double s,
                                                                     const VariationalOptions& opt = {});

// First report: 2U^{nu1} - U^{nu2} - V/xi = ell on supp(nu1), <= ell on the rest
// of [0, inf). Second: 2U^{nu2} - U^{nu1} = 0 where xi nu2 < sigma, > 0 elsewhere.
std::pair<VariationalReport, VariationalReport> check_variational_nu(const ScaledParams& sp, double xi,
                                                                     const VariationalOptions& opt = {
                                                                         60, 20, 128, 1e-4});

// I(a, b) = -int int log|x - y| da(x) db(y).
double mutual_energy(const DensityGrid& a, const DensityGrid& b);

double energy_with_field(const DensityGrid& nu1, const DensityGrid& nu2,
                         const std::function<double(double)>& field, double xi);
double energy(const DensityGrid& nu1, const DensityGrid& nu2, const ScaledParams& sp, double xi);

// E((1-eps) nu + eps g) - E(nu) for random admissible g.
struct ProbeResult {
    double eps = 0.0;
    double base = 0.0;
    double perturbed = 0.0;
    double delta() const { return perturbed - base; }
};
std::vector<ProbeResult> minimality_probes(const ScaledParams& sp, double xi, std::size_t count = 5,
                                           double eps = 0.05, std::uint64_t seed = 1,
                                           std::size_t interp_nodes = 128);

}  // namespace besq
