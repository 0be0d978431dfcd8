#include "besq/bessel_sim.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <thread>

#include "besq/error.hpp"
#include "besq/symbol.hpp"

namespace besq {
namespace {

using MatrixXcd = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

// Two standard normals for (step, entry) of a replica.
std::array<double, 2> normal_pair(std::uint64_t seed, std::size_t replica, std::size_t entry, std::size_t step) {
    const PhiloxBlock ctr{static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(entry),
                          static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
    const auto r = philox4x32(ctr, {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    return {rad * std::cos(2.0 * M_PI * u2), rad * std::sin(2.0 * M_PI * u2)};
}

std::vector<double> eigenvalues_of(const MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NonConvergence("hermitian eigensolver did not converge");
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

template <class T>
void put(std::ostream& os, T v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    os.write(buf, res.ptr - buf);
}

}  // namespace

PhiloxBlock philox4x32(PhiloxBlock c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

std::size_t PathEnsemble::index_of(double t) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs(tau(i) - t) < std::abs(tau(best) - t)) best = i;
    }
    return best;
}

PathEnsemble simulate_from(const ComplexMatrix& x0, long alpha, const SimConfig& cfg, std::size_t replica) {
    require(cfg.steps >= 2, "simulate: need at least two steps");
    require(alpha >= 0, "simulate: alpha must be a nonnegative integer");
    require(x0.cols >= 1 && x0.rows == x0.cols + static_cast<std::size_t>(alpha),
            "simulate: start matrix must be (n + alpha) x n");
    const std::size_t n = x0.cols;
    const std::size_t rows = x0.rows;
    PathEnsemble ens;
    ens.n = n;
    ens.alpha = alpha;
    ens.replica = replica;
    const double horizon = ens.horizon();

    MatrixXcd start(rows, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < rows; ++i) start(i, j) = x0(i, j);
    }
    const MatrixXcd h0 = start.adjoint() * start;
    ens.a = h0.real().trace() / static_cast<double>(n);

    MatrixXcd bridge = MatrixXcd::Zero(rows, n);
    const double h = horizon / static_cast<double>(cfg.steps);
    ens.times.reserve(cfg.steps + 1);
    ens.positions.reserve(cfg.steps + 1);
    ens.times.push_back(0.0);
    ens.positions.push_back(eigenvalues_of(h0));
    for (std::size_t step = 1; step <= cfg.steps; ++step) {
        const double u = horizon * static_cast<double>(step) / static_cast<double>(cfg.steps);
        ens.times.push_back(u);
        if (step == cfg.steps) {
            ens.positions.emplace_back(n, 0.0);
            break;
        }
        // B(u) | B(u - h) ~ N(B (T' - u) / (T' - u + h), h (T' - u) / (T' - u + h)).
        const double rest = horizon - u;
        const double shrink = rest / (rest + h);
        const double sd = std::sqrt(h * shrink);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < rows; ++i) {
                const auto z = normal_pair(cfg.seed, replica, j * rows + i, step);
                bridge(i, j) = bridge(i, j) * shrink + std::complex<double>(sd * z[0], sd * z[1]);
            }
        }
        const MatrixXcd x = start * (1.0 - u / horizon) + bridge;
        auto ev = eigenvalues_of(x.adjoint() * x);
        for (std::size_t k = 1; k < ev.size(); ++k) {
            if (!(ev[k] - ev[k - 1] > 1e-13)) {
                throw NonIntersectionViolation("simulate: paths " + std::to_string(k - 1) + " and " +
                                               std::to_string(k) + " meet at step " + std::to_string(step));
            }
        }
        for (double& v : ev) v = std::max(v, 0.0);
        ens.positions.push_back(std::move(ev));
    }
    return ens;
}

PathEnsemble simulate(std::size_t n, long alpha, double a, const SimConfig& cfg, std::size_t replica) {
    require(n >= 1, "simulate: n must be positive");
    require(a > 0.0, "simulate: a must be positive");
    require(alpha >= 0, "simulate: alpha must be a nonnegative integer");
    ComplexMatrix x0{n + static_cast<std::size_t>(alpha), n, {}};
    x0.data.assign(x0.rows * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) x0(j, j) = std::sqrt(a);
    auto ens = simulate_from(x0, alpha, cfg, replica);
    ens.a = a;
    ens.positions.front().assign(n, a);
    return ens;
}

std::vector<PathEnsemble> simulate_replicas(std::size_t n, long alpha, double a, const SimConfig& cfg,
                                            unsigned threads) {
    require(cfg.replicas >= 1, "simulate: need at least one replica");
    std::vector<PathEnsemble> out(cfg.replicas);
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(cfg.replicas));
    if (threads == 1) {
        for (std::size_t r = 0; r < cfg.replicas; ++r) out[r] = simulate(n, alpha, a, cfg, r);
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t r = w; r < cfg.replicas; r += threads) out[r] = simulate(n, alpha, a, cfg, r);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& hm) {
    require(hm.rows == hm.cols && hm.rows >= 1, "hermitian_eigenvalues: matrix must be square");
    const std::size_t n = hm.rows;
    MatrixXcd h(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) h(i, j) = hm(i, j);
    }
    const double norm = std::max(h.norm(), 1e-300);
    require((h - h.adjoint()).norm() <= 1e-12 * norm, "hermitian_eigenvalues: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw NonConvergence("hermitian_eigenvalues: eigensolver did not converge");
    for (std::size_t k = 0; k < n; ++k) {
        const auto v = es.eigenvectors().col(static_cast<Eigen::Index>(k));
        if ((h * v - es.eigenvalues()(static_cast<Eigen::Index>(k)) * v).norm() > 1e-10 * norm) {
            throw NonConvergence("hermitian_eigenvalues: eigenpair residual too large");
        }
    }
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

EnvelopeReport envelope_check(const PathEnsemble& ens, const std::vector<double>& taus) {
    EnvelopeReport rep;
    const double p = static_cast<double>(ens.alpha) / static_cast<double>(ens.n);
    for (double tau : taus) {
        require(tau > 0.0 && tau < 1.0, "envelope_check: tau must lie in (0, 1)");
        const auto& pos = ens.positions[ens.index_of(tau)];
        const auto e = edge_curves(ScaledParams(ens.a, tau, p), 1.0);
        const double delta = 0.15 * (e.gamma - e.beta);
        const auto out = std::count_if(pos.begin(), pos.end(),
                                       [&](double x) { return x < e.beta - delta || x > e.gamma + delta; });
        EnvelopeRow row{tau, e.beta, e.gamma, static_cast<double>(out) / static_cast<double>(pos.size()),
                        *std::min_element(pos.begin(), pos.end())};
        rep.max_outlier_fraction = std::max(rep.max_outlier_fraction, row.outlier_fraction);
        rep.rows.push_back(row);
    }
    return rep;
}

void write_csv(std::ostream& os, const std::vector<PathEnsemble>& ens) {
    os << "replica,tau,path_index,position\n";
    for (const auto& e : ens) {
        for (std::size_t i = 0; i < e.times.size(); ++i) {
            for (std::size_t k = 0; k < e.positions[i].size(); ++k) {
                put(os, e.replica);
                os << ',';
                put(os, e.tau(i));
                os << ',';
                put(os, k);
                os << ',';
                put(os, e.positions[i][k]);
                os << '\n';
            }
        }
    }
}

}  // namespace besq
