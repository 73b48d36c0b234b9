#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hermtrace/matrix_model.hpp"
#include "hermtrace/scattering.hpp"
#include "hermtrace/types.hpp"

namespace hermtrace {

/// Probabilities on directed edges after each step, steps 0..n.
using WalkHistory = std::vector<std::vector<double>>;

/// a(n+1) = S(lambda) a(n) from a unit amplitude on start_edge.
/// ConvergenceError if the norm drifts by more than 1e-10.
WalkHistory quantum_walk(const ScatteringSystem& sys, double lambda, int start_edge, int steps);

/// P(n+1) = M(lambda) P(n) from a delta on start_edge.
WalkHistory classical_walk(const ScatteringSystem& sys, double lambda, int start_edge, int steps);

/// Position of directed edge e: midpoint of its two vertex indices.
double edge_position(const AssociatedGraphs& graphs, int e);
double position_variance(const AssociatedGraphs& graphs, std::span<const double> probabilities);

/// Least-squares slope of log variance against log step over [first, last].
double loglog_slope(std::span<const double> variances, int first, int last);

struct DiagonalDecomposition {
    double p_qw = 0;          // |sum_walks W|^2
    double p_rw = 0;          // sum_walks |W|^2
    double off_diagonal = 0;  // p_qw - p_rw
    double p_qw_matrix = 0;   // |(S^n)_{target, start}|^2
    double p_rw_matrix = 0;   // (M^n)_{target, start}
    std::size_t walk_count = 0;
};

/// Census of all n-step edge walks from start to target; steps <= 8.
DiagonalDecomposition diagonal_decomposition(const ScatteringSystem& sys, double lambda, int start_edge,
                                             int target_edge, int steps);

// -- Jacobi / Anderson chains -----------------------------------------------------

/// Tridiagonal matrix with free diagonal and unit off-diagonal.
struct JacobiChain {
    std::vector<double> diagonal;

    [[nodiscard]] int n() const { return static_cast<int>(diagonal.size()); }
    [[nodiscard]] HermitianMatrix to_matrix() const;
};

/// 2 arccot((H_vv - lambda) / 2) with arccot in (0, pi).
double chain_phase(double hvv, double lambda);

struct JacobiScattering {
    double phi = 0;
    CMatrix rational;  // i / (d - 2i) [[d, 2i], [2i, d]], d = H_vv - lambda
    CMatrix phase;     // i e^{i phi/2} [[cos(phi/2), i sin(phi/2)], [i sin(phi/2), cos(phi/2)]]
};

/// Interior chain vertex; both closed forms are returned for comparison.
JacobiScattering jacobi_vertex_scattering(double hvv, double lambda);

/// i (d + i) / (d - i) = e^{i phi/2}, d = H_vv - lambda, for a chain end.
Complex endpoint_phase(double hvv, double lambda);

/// Maps (a_{v,v-1}, a_{v-1,v}) to (a_{v+1,v}, a_{v,v+1}).
CMatrix transfer_matrix(double hvv, double lambda);

/// a_{N,N-1} - e^{-i phi_N/2} a_{N-1,N} after the transfer product started
/// from (e^{i phi_1/2}, 1). Vanishes exactly on the spectrum.
Complex anderson_secular(const JacobiChain& chain, double lambda);

/// (i/2) (d_N + i)(d_1 - i) times the residual: a real polynomial in lambda
/// with the chain eigenvalues as its simple zeros.
double anderson_secular_real(const JacobiChain& chain, double lambda);

struct SecularScan {
    std::vector<double> lambdas;
    std::vector<double> values;
    std::vector<double> roots;
};

/// Sign-change scan of the real secular function on [lo, hi] followed by
/// bisection of every bracket to `tol`.
SecularScan anderson_roots(const JacobiChain& chain, double lo, double hi, int steps, double tol = 1e-13);

// -- randomness -----------------------------------------------------------------

/// Counter-based SplitMix64 stream: value k depends only on (seed, k).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    [[nodiscard]] std::uint64_t at(std::uint64_t counter) const;
    /// Uniform on the open interval (0, 1).
    [[nodiscard]] double uniform(std::uint64_t counter) const;
    double next_uniform() { return uniform(counter_++); }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Cauchy law with density 2 / (pi (4 + (x - mu)^2)) by inverse CDF.
double cauchy_sample(double mu, double u);

JacobiChain random_cauchy_chain(int n, double mu, std::uint64_t seed);

struct PhaseSample {
    std::vector<double> phases;  // in (0, 2 pi)
    double ks_statistic = 0;     // against the uniform law on (0, 2 pi)
    double ks_critical = 0;      // 1% level, 1.63 / sqrt(n)
    [[nodiscard]] bool uniform_accepted() const { return ks_statistic < ks_critical; }
};

PhaseSample cauchy_phase_sampler(double mu, double lambda, int samples, std::uint64_t seed);

}  // namespace hermtrace
