#include "hermtrace/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>

#include "hermtrace/errors.hpp"
#include "hermtrace/kahan.hpp"

namespace hermtrace {

ScatteringSystem::ScatteringSystem(HermitianMatrix h, double zero_threshold)
    : h_(std::move(h)), g_(build_graphs(h_, zero_threshold)) {}

CVector ScatteringSystem::coupling_vector(int v) const {
    if (v < 0 || v >= h_.n()) throw ArgumentError("coupling_vector: vertex out of range");
    const auto& nb = g_.graphs.neighborhoods[v];
    if (nb.empty()) throw StructureError("coupling_vector: vertex " + std::to_string(v) + " is isolated");
    CVector lam(static_cast<Eigen::Index>(nb.size()));
    for (std::size_t i = 0; i < nb.size(); ++i) {
        const int w = nb[i];
        lam(static_cast<Eigen::Index>(i)) = std::sqrt(g_.phases.h(v, w)) * std::exp(Complex(0, -g_.phases.gamma(v, w)));
    }
    return lam;
}

VertexScattering ScatteringSystem::vertex_scattering(int v, Complex lambda) const {
    const CVector lam = coupling_vector(v);
    const double gamma = g_.gershgorin.radii[v];
    const Complex pole = h_.diag(v) - lambda - Complex(0, gamma);
    if (std::abs(pole) < 1e-12) {
        throw SingularityError("vertex_scattering: lambda at the pole of vertex " + std::to_string(v));
    }
    const auto d = lam.size();
    CMatrix sigma = Complex(0, 1) * CMatrix::Identity(d, d) - (2.0 / pole) * (lam * lam.adjoint());
    return {v, static_cast<int>(d), lambda, std::move(sigma)};
}

EvolutionOperatorII ScatteringSystem::assemble(Complex lambda) const {
    const auto& gr = g_.graphs;
    EvolutionOperatorII out;
    out.lambda = lambda;
    const auto m = static_cast<Eigen::Index>(gr.directed_edges.size());
    out.matrix = CMatrix::Zero(m, m);
    std::vector<int> block_of(gr.n, -1);
    for (int v = 0; v < gr.n; ++v) {
        if (gr.degrees[v] == 0) continue;
        block_of[v] = static_cast<int>(out.blocks.size());
        out.blocks.push_back(vertex_scattering(v, lambda));
    }
    for (Eigen::Index e = 0; e < m; ++e) {
        const auto [v, w] = gr.directed_edges[e];
        const auto& sigma = out.blocks[block_of[v]].matrix;
        const int col = gr.neighbor_slot(v, w);
        const auto& nb = gr.neighborhoods[v];
        for (std::size_t row = 0; row < nb.size(); ++row) {
            out.matrix(gr.edge_index(nb[row], v), e) = sigma(static_cast<Eigen::Index>(row), col);
        }
    }
    return out;
}

Complex ScatteringSystem::spectral_det(Complex lambda, Complex z) const {
    if (edge_count() == 0) return {1, 0};
    const CMatrix s = assemble(lambda).matrix;
    const CMatrix a = CMatrix::Identity(s.rows(), s.cols()) - z * s;
    return a.partialPivLu().determinant();
}

Complex ScatteringSystem::zeta_h(Complex lambda) const {
    const CMatrix a = h_.entries() - lambda * CMatrix::Identity(h_.n(), h_.n());
    return a.partialPivLu().determinant();
}

Complex ScatteringSystem::factorization_rhs(Complex lambda) const {
    Complex denom(1, 0);
    for (int v = 0; v < h_.n(); ++v) denom *= h_.diag(v) - lambda - Complex(0, g_.gershgorin.radii[v]);
    return std::pow(2.0, edge_count()) * zeta_h(lambda) / denom;
}

double ScatteringSystem::factorization_residual(Complex lambda) const {
    const Complex lhs = spectral_det(lambda);
    const Complex rhs = factorization_rhs(lambda);
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
}

Complex ScatteringSystem::det_closed_form(Complex lambda) const {
    Complex p(1, 0);
    for (int v = 0; v < h_.n(); ++v) {
        const double gamma = g_.gershgorin.radii[v];
        if (gamma == 0) continue;
        const Complex d = h_.diag(v) - lambda;
        p *= (d + Complex(0, gamma)) / (d - Complex(0, gamma));
    }
    return p;
}

double ScatteringSystem::functional_equation_residual(double lambda) const {
    const Complex zeta = spectral_det(lambda);
    const Complex det_s = edge_count() == 0 ? Complex(1, 0) : assemble(lambda).matrix.partialPivLu().determinant();
    return std::abs(zeta - det_s * std::conj(zeta));
}

double ScatteringSystem::smooth_count(double lambda, Mode mode) const {
    KahanSum<double> acc;
    for (int v = 0; v < h_.n(); ++v) {
        const double d = h_.diag(v) - lambda;
        const double gamma = g_.gershgorin.radii[v];
        if (mode == Mode::Counting) {
            if (gamma == 0) {
                acc += lambda >= h_.diag(v) ? 1.0 : 0.0;
            } else {
                acc += std::acos(std::clamp(d / std::hypot(d, gamma), -1.0, 1.0)) / kPi;
            }
        } else if (gamma > 0) {
            acc += gamma / (kPi * (d * d + gamma * gamma));
        }
    }
    return acc.value();
}

double osc_from_eigenvalues(std::span<const Complex> eigenvalues) {
    KahanSum<double> acc;
    for (const Complex& z : eigenvalues) acc += std::log(1.0 - z).imag();
    return -acc.value() / kPi;
}

double ScatteringSystem::osc_count(double lambda, double epsilon, int n_max, OscMethodII method) const {
    if (!(epsilon > 0)) throw ArgumentError("osc_count_II: epsilon must be positive");
    if (edge_count() == 0) return 0.0;
    const CMatrix s = assemble(Complex(lambda, epsilon)).matrix;
    if (method == OscMethodII::Eigenphase) {
        Eigen::ComplexEigenSolver<CMatrix> solver(s, false);
        if (solver.info() != Eigen::Success) throw ConvergenceError("osc_count_II: eigenvalues of S did not converge");
        const CVector ev = solver.eigenvalues();
        return osc_from_eigenvalues(std::span<const Complex>(ev.data(), static_cast<std::size_t>(ev.size())));
    }
    if (n_max < 0) throw ArgumentError("osc_count_II: n_max must be >= 0");
    KahanSum<Complex> acc;
    CMatrix power = CMatrix::Identity(s.rows(), s.cols());
    for (int n = 1; n <= n_max; ++n) {
        power = s * power;
        acc += power.trace() / static_cast<double>(n);
    }
    return acc.value().imag() / kPi;
}

RMatrix ScatteringSystem::markov_matrix(double lambda) const {
    if (edge_count() == 0) return RMatrix(0, 0);
    return assemble(lambda).matrix.cwiseAbs2();
}

CountingResult count_grid_II(const ScatteringSystem& sys, std::span<const double> lambdas, double epsilon,
                             OscMethodII method, int n_max, int threads) {
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas[i - 1])) throw ArgumentError("count_grid_II: grid must be strictly increasing");
    }
    CountingResult r;
    r.lambdas.assign(lambdas.begin(), lambdas.end());
    r.method = method == OscMethodII::Eigenphase ? "eigenphase" : "tracesum";
    r.policy = {epsilon, n_max, 0};
    r.mode = Mode::Counting;
    const std::size_t m = lambdas.size();
    r.smooth.resize(m);
    r.oscillating.resize(m);
    r.total.resize(m);
    auto work = [&](std::size_t i) {
        r.smooth[i] = sys.smooth_count(lambdas[i]);
        r.oscillating[i] = sys.osc_count(lambdas[i], epsilon, n_max, method);
        r.total[i] = r.smooth[i] + r.oscillating[i];
    };
    threads = std::max(1, std::min<int>(threads, static_cast<int>(m)));
    if (threads == 1) {
        for (std::size_t i = 0; i < m; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < m; i += threads) work(i);
            });
        }
        for (auto& th : pool) th.join();
    }
    return r;
}

// ---------------------------------------------------------------------------

Complex closed_form_interval(const HermitianMatrix& h, Complex lambda, Complex z) {
    if (h.n() != 2) throw StructureError("closed_form_interval: need a 2 x 2 matrix");
    const double hh = std::abs(h(0, 1));
    if (hh == 0) throw StructureError("closed_form_interval: H_12 must be nonzero");
    auto phase = [&](int v) {
        const Complex d = h.diag(v) - lambda;
        return Complex(0, 1) * (d + Complex(0, hh)) / (d - Complex(0, hh));
    };
    return 1.0 - z * z * phase(0) * phase(1);
}

namespace {

struct TwoStarData {
    Complex k, dplus, dminus;
};

TwoStarData two_star_data(const HermitianMatrix& h, Complex lambda) {
    if (h.n() != 3 || h(1, 2) != Complex(0, 0) || h(0, 1) == Complex(0, 0) || h(0, 2) == Complex(0, 0)) {
        throw StructureError("two-star: need H_12 = 0 and H_01, H_02 nonzero");
    }
    const double g1 = std::abs(h(0, 1)), g2 = std::abs(h(0, 2));
    const double gamma[3] = {g1 + g2, g1, g2};
    const CMatrix shifted = h.entries() - lambda * CMatrix::Identity(3, 3);
    const Complex zeta_h = shifted.partialPivLu().determinant();
    TwoStarData d{zeta_h + gamma[1] * gamma[2] * shifted.trace(), 1.0, 1.0};
    for (int v = 0; v < 3; ++v) {
        const Complex dv = h.diag(v) - lambda;
        d.dplus *= dv + Complex(0, gamma[v]);
        d.dminus *= dv - Complex(0, gamma[v]);
    }
    return d;
}

}  // namespace

Complex closed_form_two_star(const HermitianMatrix& h, Complex lambda, Complex z) {
    const auto d = two_star_data(h, lambda);
    const Complex z2 = z * z;
    return 1.0 + z2 * 2.0 * d.k / d.dminus + z2 * z2 * d.dplus / d.dminus;
}

std::vector<Complex> two_star_roots(const HermitianMatrix& h, Complex lambda) {
    const auto d = two_star_data(h, lambda);
    Complex disc = std::sqrt(d.k * d.k - d.dplus * d.dminus);
    if (std::abs(d.k + disc) < std::abs(d.k - disc)) disc = -disc;
    const Complex q = -(d.k + disc);
    std::vector<Complex> roots;
    for (const Complex w : {q / d.dplus, d.dminus / q}) {
        const Complex z = std::sqrt(w);
        roots.push_back(z);
        roots.push_back(-z);
    }
    return roots;
}

}  // namespace hermtrace
