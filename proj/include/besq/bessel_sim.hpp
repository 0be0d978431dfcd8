#pragma once

// n non-intersecting squared Bessel bridges from a to 0 on [0, 1/(2n)],
// realized as eigenvalues of X(u)* X(u) for an (n + alpha) x n complex
// Brownian bridge X started at sqrt(a) [I; 0].

#include <array>
#include <complex>
#include <cstdint>
#include <ostream>
#include <vector>

#include "besq/model.hpp"

namespace besq {

// Philox4x32-10 counter-based generator.
using PhiloxBlock = std::array<std::uint32_t, 4>;
PhiloxBlock philox4x32(PhiloxBlock counter, std::array<std::uint32_t, 2> key);

struct SimConfig {
    std::size_t steps = 200;
    std::uint64_t seed = 0;
    std::size_t replicas = 1;
};

struct PathEnsemble {
    std::size_t n = 0;
    long alpha = 0;
    double a = 0.0;
    std::size_t replica = 0;
    std::vector<double> times;                   // u in [0, T'], T' = 1/(2n)
    std::vector<std::vector<double>> positions;  // positions[i] sorted, at times[i]

    double horizon() const { return 0.5 / static_cast<double>(n); }
    double tau(std::size_t i) const { return times[i] / horizon(); }
    // Index of the stored time closest to tau.
    std::size_t index_of(double tau) const;
};

// Column-major (rows x cols) complex matrix.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::complex<double>> data;

    std::complex<double>& operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
    std::complex<double> operator()(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
};

// Replica `replica` of the bridge started at x0 ((n + alpha) x n).
PathEnsemble simulate_from(const ComplexMatrix& x0, long alpha, const SimConfig& cfg, std::size_t replica = 0);
PathEnsemble simulate(std::size_t n, long alpha, double a, const SimConfig& cfg, std::size_t replica = 0);
// cfg.replicas replicas on up to `threads` threads, ordered by replica index.
std::vector<PathEnsemble> simulate_replicas(std::size_t n, long alpha, double a, const SimConfig& cfg,
                                            unsigned threads = 1);

// Ascending eigenvalues of a Hermitian matrix; checks Hermitian symmetry and
// the residual of every eigenpair.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

struct EnvelopeRow {
    double tau = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double outlier_fraction = 0.0;
    double min_path = 0.0;
};

struct EnvelopeReport {
    std::vector<EnvelopeRow> rows;
    double max_outlier_fraction = 0.0;
};

// Fraction of paths outside [beta - delta, gamma + delta], delta = 0.15 (gamma - beta),
// with the edges of module symbol at s = 1, t := tau, p = alpha / n.
EnvelopeReport envelope_check(const PathEnsemble& ens, const std::vector<double>& taus);

// Columns replica,tau,path_index,position.
void write_csv(std::ostream& os, const std::vector<PathEnsemble>& ens);

}  // namespace besq
