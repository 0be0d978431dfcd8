#pragma once

// Densities of mu_1^s, mu_2^s, their s-averages nu_1^xi, nu_2^xi, the
// constraint sigma, the external field V and the Marchenko-Pastur law.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "besq/model.hpp"
#include "besq/quadrature.hpp"

namespace besq {

// [lo, hi]; lo = -inf marks a lower tail, integrated with x = hi - scale tan^2.
struct SupportPiece {
    double lo = 0.0;
    double hi = 0.0;
    double scale = 1.0;
};

struct DensityGrid {
    std::function<double(double)> density;
    std::vector<SupportPiece> pieces;  // increasing, adjacent pieces share an end
    double mass = 0.0;                 // declared total mass (inf for sigma)
    // Filled by tabulate().
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> cumulative;

    double lower() const { return pieces.front().lo; }
    double upper() const { return pieces.back().hi; }
};

quad::Options measure_options();

// int g(y) density(y) dy over the support, split at the given breakpoints.
double integrate_against(const DensityGrid& grid, const std::function<double(double)>& g,
                         std::span<const double> breaks = {}, const quad::Options& opt = measure_options());
double total_mass(const DensityGrid& grid, const quad::Options& opt = measure_options());

// Samples `per_piece` nodes per support piece (uniform in the mapped
// variable) and the cumulative mass from the lower end of the support.
void tabulate(DensityGrid& grid, std::size_t per_piece);

// Copy of `grid` whose density is a Chebyshev interpolant (first-kind nodes,
// `per_piece` per support piece) of density * Jacobian in the mapped variable.
// Cheap to evaluate; used for potentials and energies of the averaged measures.
DensityGrid interpolated(const DensityGrid& grid, std::size_t per_piece = 128);

// ---- pointwise densities (0 outside the support) ---------------------------

double mu1_density(const ScaledParams& sp, double s, double x);
double mu2_density(const ScaledParams& sp, double s, double x);
double mu1_cdf(const ScaledParams& sp, double s, double x);

double nu1_density(const ScaledParams& sp, double xi, double x);
double nu2_density(const ScaledParams& sp, double xi, double x);
double nu1_cdf(const ScaledParams& sp, double xi, double x);

double sigma_closed(const ScaledParams& sp, double x);
double sigma_numeric(const ScaledParams& sp, double x);

double V_closed(const ScaledParams& sp, double x);
double V_numeric(const ScaledParams& sp, double x);

struct MpEdges {
    double rho1 = 0.0;
    double rho2 = 0.0;
};
MpEdges mp_edges(double t, double p);
double mp_density(double t, double p, double x);

// int dmu_1^s(y)/(x - y) by quadrature, and its closed form z_1'/z_1.
std::complex<double> mu1_stieltjes(const ScaledParams& sp, double s, std::complex<double> x);
std::complex<double> mu1_stieltjes_closed(const ScaledParams& sp, double s, std::complex<double> x);

// ---- measures as grids ---------------------------------------------------

DensityGrid mu1_grid(const ScaledParams& sp, double s);
DensityGrid mu2_grid(const ScaledParams& sp, double s);
DensityGrid nu1_grid(const ScaledParams& sp, double xi);
DensityGrid nu2_grid(const ScaledParams& sp, double xi);
DensityGrid sigma_grid(const ScaledParams& sp);
DensityGrid mp_grid(double t, double p);

}  // namespace besq
