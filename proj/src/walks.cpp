#include "hermtrace/walks.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>

#include "hermtrace/errors.hpp"
#include "hermtrace/kahan.hpp"

namespace hermtrace {

namespace {

using SparseC = Eigen::SparseMatrix<Complex>;

void check_edge(const ScatteringSystem& sys, int e, const char* what) {
    const int m = static_cast<int>(sys.graph().graphs.directed_edges.size());
    if (e < 0 || e >= m) {
        throw ArgumentError(std::string(what) + ": directed edge " + std::to_string(e) + " out of range 0.." +
                            std::to_string(m - 1));
    }
}

}  // namespace

WalkHistory quantum_walk(const ScatteringSystem& sys, double lambda, int start_edge, int steps) {
    check_edge(sys, start_edge, "quantum_walk");
    if (steps < 0) throw ArgumentError("quantum_walk: steps must be >= 0");
    const SparseC s = sys.assemble(lambda).matrix.sparseView();
    CVector a = CVector::Zero(s.rows());
    a(start_edge) = 1.0;
    WalkHistory out;
    out.reserve(steps + 1);
    for (int n = 0; n <= steps; ++n) {
        if (n > 0) a = s * a;
        const double norm = a.squaredNorm();
        if (std::abs(norm - 1.0) > 1e-10) {
            throw ConvergenceError("quantum_walk: norm drift " + std::to_string(norm - 1.0) + " at step " +
                                   std::to_string(n));
        }
        std::vector<double> p(a.size());
        for (Eigen::Index e = 0; e < a.size(); ++e) p[e] = std::norm(a(e));
        out.push_back(std::move(p));
    }
    return out;
}

WalkHistory classical_walk(const ScatteringSystem& sys, double lambda, int start_edge, int steps) {
    check_edge(sys, start_edge, "classical_walk");
    if (steps < 0) throw ArgumentError("classical_walk: steps must be >= 0");
    const Eigen::SparseMatrix<double> m = sys.markov_matrix(lambda).sparseView();
    RVector p = RVector::Zero(m.rows());
    p(start_edge) = 1.0;
    WalkHistory out;
    out.reserve(steps + 1);
    for (int n = 0; n <= steps; ++n) {
        if (n > 0) p = m * p;
        out.emplace_back(p.data(), p.data() + p.size());
    }
    return out;
}

double edge_position(const AssociatedGraphs& graphs, int e) {
    const auto& edge = graphs.directed_edges.at(e);
    return 0.5 * (edge.head + edge.tail);
}

double position_variance(const AssociatedGraphs& graphs, std::span<const double> probabilities) {
    KahanSum<double> mass, first, second;
    for (std::size_t e = 0; e < probabilities.size(); ++e) {
        const double x = edge_position(graphs, static_cast<int>(e));
        mass += probabilities[e];
        first += probabilities[e] * x;
        second += probabilities[e] * x * x;
    }
    const double mean = first.value() / mass.value();
    return second.value() / mass.value() - mean * mean;
}

double loglog_slope(std::span<const double> variances, int first, int last) {
    if (first < 1 || last <= first || last >= static_cast<int>(variances.size())) {
        throw ArgumentError("loglog_slope: need 1 <= first < last < size");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int count = last - first + 1;
    for (int n = first; n <= last; ++n) {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(variances[n]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

DiagonalDecomposition diagonal_decomposition(const ScatteringSystem& sys, double lambda, int start_edge,
                                             int target_edge, int steps) {
    check_edge(sys, start_edge, "diagonal_decomposition");
    check_edge(sys, target_edge, "diagonal_decomposition");
    if (steps < 0 || steps > 8) throw ResourceError("diagonal_decomposition: steps must lie in 0..8");
    const CMatrix s = sys.assemble(lambda).matrix;
    const auto m = s.rows();
    std::vector<std::vector<std::pair<int, Complex>>> out_edges(m);
    for (Eigen::Index col = 0; col < m; ++col)
        for (Eigen::Index row = 0; row < m; ++row)
            if (s(row, col) != Complex(0, 0)) out_edges[col].emplace_back(static_cast<int>(row), s(row, col));

    DiagonalDecomposition d;
    KahanSum<Complex> amplitude;
    KahanSum<double> classical;
    auto walk = [&](auto&& self, int e, int depth, Complex w) -> void {
        if (depth == steps) {
            if (e == target_edge) {
                amplitude += w;
                classical += std::norm(w);
                ++d.walk_count;
            }
            return;
        }
        for (const auto& [next, value] : out_edges[e]) self(self, next, depth + 1, w * value);
    };
    walk(walk, start_edge, 0, Complex(1, 0));

    d.p_qw = std::norm(amplitude.value());
    d.p_rw = classical.value();
    d.off_diagonal = d.p_qw - d.p_rw;
    CMatrix sp = CMatrix::Identity(m, m);
    RMatrix mp = RMatrix::Identity(m, m);
    const RMatrix markov = s.cwiseAbs2();
    for (int n = 0; n < steps; ++n) {
        sp = s * sp;
        mp = markov * mp;
    }
    d.p_qw_matrix = std::norm(sp(target_edge, start_edge));
    d.p_rw_matrix = mp(target_edge, start_edge);
    return d;
}

// ---------------------------------------------------------------------------

HermitianMatrix JacobiChain::to_matrix() const {
    const int size = n();
    if (size < 1) throw ArgumentError("JacobiChain: empty chain");
    CMatrix m = CMatrix::Zero(size, size);
    for (int v = 0; v < size; ++v) {
        m(v, v) = diagonal[v];
        if (v + 1 < size) m(v, v + 1) = m(v + 1, v) = 1.0;
    }
    return HermitianMatrix::from_dense(m);
}

double chain_phase(double hvv, double lambda) {
    const double x = (hvv - lambda) / 2;
    return 2 * (kPi / 2 - std::atan(x));
}

JacobiScattering jacobi_vertex_scattering(double hvv, double lambda) {
    const double d = hvv - lambda;
    const Complex i(0, 1);
    JacobiScattering out;
    out.phi = chain_phase(hvv, lambda);
    out.rational.resize(2, 2);
    out.rational << d, 2.0 * i, 2.0 * i, d;
    out.rational *= i / (d - 2.0 * i);
    const double c = std::cos(out.phi / 2), s = std::sin(out.phi / 2);
    out.phase.resize(2, 2);
    out.phase << c, i * s, i * s, c;
    out.phase *= i * std::exp(i * (out.phi / 2));
    return out;
}

Complex endpoint_phase(double hvv, double lambda) {
    const double d = hvv - lambda;
    const Complex i(0, 1);
    return i * (d + i) / (d - i);
}

CMatrix transfer_matrix(double hvv, double lambda) {
    const double phi = chain_phase(hvv, lambda);
    const double cot = std::cos(phi / 2) / std::sin(phi / 2);
    const Complex i(0, 1);
    CMatrix t(2, 2);
    t << -i - cot, -cot * i, cot * i, i - cot;
    return t;
}

Complex anderson_secular(const JacobiChain& chain, double lambda) {
    const int n = chain.n();
    if (n < 2) throw ArgumentError("anderson_secular: need N >= 2");
    CVector x(2);
    x << endpoint_phase(chain.diagonal[0], lambda), 1.0;
    for (int v = 1; v + 1 < n; ++v) x = transfer_matrix(chain.diagonal[v], lambda) * x;
    return x(0) - x(1) / endpoint_phase(chain.diagonal[n - 1], lambda);
}

double anderson_secular_real(const JacobiChain& chain, double lambda) {
    const Complex i(0, 1);
    const double d1 = chain.diagonal.front() - lambda, dn = chain.diagonal.back() - lambda;
    return (0.5 * i * (dn + i) * (d1 - i) * anderson_secular(chain, lambda)).real();
}

SecularScan anderson_roots(const JacobiChain& chain, double lo, double hi, int steps, double tol) {
    if (!(hi > lo) || steps < 2) throw ArgumentError("anderson_roots: need lo < hi and steps >= 2");
    SecularScan out;
    out.lambdas.resize(steps);
    out.values.resize(steps);
    for (int k = 0; k < steps; ++k) {
        out.lambdas[k] = lo + (hi - lo) * k / (steps - 1);
        out.values[k] = anderson_secular_real(chain, out.lambdas[k]);
    }
    for (int k = 0; k < steps; ++k) {
        if (out.values[k] == 0) {
            out.roots.push_back(out.lambdas[k]);
            continue;
        }
        if (k + 1 == steps || out.values[k + 1] == 0 || (out.values[k] > 0) == (out.values[k + 1] > 0)) continue;
        double a = out.lambdas[k], b = out.lambdas[k + 1];
        double fa = out.values[k];
        while (b - a > tol) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            const double fm = anderson_secular_real(chain, mid);
            if (fm == 0) {
                a = b = mid;
                break;
            }
            if ((fm > 0) == (fa > 0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        out.roots.push_back(0.5 * (a + b));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::uint64_t CounterRng::at(std::uint64_t counter) const {
    std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const {
    return (static_cast<double>(at(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double cauchy_sample(double mu, double u) { return mu + 2 * std::tan(kPi * (u - 0.5)); }

JacobiChain random_cauchy_chain(int n, double mu, std::uint64_t seed) {
    if (n < 1) throw ArgumentError("random_cauchy_chain: n must be >= 1");
    CounterRng rng(seed);
    JacobiChain chain;
    for (int v = 0; v < n; ++v) chain.diagonal.push_back(cauchy_sample(mu, rng.next_uniform()));
    return chain;
}

PhaseSample cauchy_phase_sampler(double mu, double lambda, int samples, std::uint64_t seed) {
    if (samples < 1) throw ArgumentError("cauchy_phase_sampler: samples must be >= 1");
    CounterRng rng(seed);
    PhaseSample out;
    out.phases.resize(samples);
    for (int k = 0; k < samples; ++k) out.phases[k] = chain_phase(cauchy_sample(mu, rng.next_uniform()), lambda);
    std::vector<double> sorted = out.phases;
    std::sort(sorted.begin(), sorted.end());
    double d = 0;
    for (int k = 0; k < samples; ++k) {
        const double f = sorted[k] / (2 * kPi);
        d = std::max({d, (k + 1.0) / samples - f, f - static_cast<double>(k) / samples});
    }
    out.ks_statistic = d;
    out.ks_critical = 1.63 / std::sqrt(static_cast<double>(samples));
    return out;
}

}  // namespace hermtrace
