#pragma once

#include <span>
#include <vector>

#include "hermtrace/matrix_model.hpp"
#include "hermtrace/trace_one.hpp"
#include "hermtrace/types.hpp"

namespace hermtrace {

/// sigma^(v)(lambda): rows and columns follow the sorted neighborhood E_v.
struct VertexScattering {
    int vertex = 0;
    int degree = 0;
    Complex lambda;
    CMatrix matrix;
};

/// The 2E x 2E directed-edge operator S = P blockdiag(sigma^(v)).
/// Entry (e', e) is the amplitude sent from edge e = (v <- w) into
/// e' = (v' <- v): sigma^(v)_{v', w}.
struct EvolutionOperatorII {
    Complex lambda;
    CMatrix matrix;
    std::vector<VertexScattering> blocks;  // one per non-isolated vertex, by vertex
};

struct SpectralDetSample {
    Complex lambda;
    Complex z;
    Complex value;
};

enum class OscMethodII { Eigenphase, TraceSum };

/// A Hermitian matrix together with its graph data; all Approach II
/// quantities are evaluated from here.
class ScatteringSystem {
public:
    explicit ScatteringSystem(HermitianMatrix h, double zero_threshold = 0.0);

    [[nodiscard]] const HermitianMatrix& matrix() const { return h_; }
    [[nodiscard]] const GraphData& graph() const { return g_; }
    [[nodiscard]] int edge_count() const { return g_.graphs.edge_count; }

    /// Lambda^(v)_w = sqrt(h_vw) e^{-i gamma_vw}; StructureError for isolated v.
    [[nodiscard]] CVector coupling_vector(int v) const;

    /// i I - 2 / (H_vv - lambda - i Gamma_v) Lambda Lambda^dagger.
    /// SingularityError within 1e-12 of the pole.
    [[nodiscard]] VertexScattering vertex_scattering(int v, Complex lambda) const;

    [[nodiscard]] EvolutionOperatorII assemble(Complex lambda) const;

    /// det(I - z S(lambda)) by pivoted LU; 1 for an edgeless graph.
    [[nodiscard]] Complex spectral_det(Complex lambda, Complex z = 1.0) const;

    /// det(H - lambda I).
    [[nodiscard]] Complex zeta_h(Complex lambda) const;
    /// 2^E det(H - lambda) / prod_v (H_vv - lambda - i Gamma_v).
    [[nodiscard]] Complex factorization_rhs(Complex lambda) const;
    [[nodiscard]] double factorization_residual(Complex lambda) const;

    /// prod_v (H_vv - lambda + i Gamma_v) / (H_vv - lambda - i Gamma_v).
    [[nodiscard]] Complex det_closed_form(Complex lambda) const;
    /// |zeta(lambda) - det S(lambda) conj(zeta(lambda))| for real lambda.
    [[nodiscard]] double functional_equation_residual(double lambda) const;

    /// Sum of arccos terms (counting) or Lorentzians (density). Isolated
    /// vertices contribute an exact step (counting) and nothing to the
    /// smooth density.
    [[nodiscard]] double smooth_count(double lambda, Mode mode = Mode::Counting) const;

    /// Oscillating counting function at lambda + i epsilon.
    [[nodiscard]] double osc_count(double lambda, double epsilon, int n_max, OscMethodII method) const;

    /// |S(lambda)_{e'e}|^2.
    [[nodiscard]] RMatrix markov_matrix(double lambda) const;

private:
    HermitianMatrix h_;
    GraphData g_;
};

/// Eigenphase form -(1/pi) sum Im log(1 - z_k) over the eigenvalues of S.
double osc_from_eigenvalues(std::span<const Complex> eigenvalues);

/// Counting function on a grid; `n_max` only matters for the trace-sum method.
CountingResult count_grid_II(const ScatteringSystem& sys, std::span<const double> lambdas, double epsilon,
                             OscMethodII method, int n_max = 0, int threads = 1);

// -- closed forms for the smallest graphs ---------------------------------------

/// 1 - z^2 sigma^(1)_{22} sigma^(2)_{11} for a 2 x 2 matrix with H_12 != 0.
Complex closed_form_interval(const HermitianMatrix& h, Complex lambda, Complex z);

/// Two-star with center 0 and leaves 1, 2 (H_12 = 0, H_01 and H_02 nonzero):
/// 1 + z^2 2K / D- + z^4 D+ / D-, with K = det(H - lambda) + Gamma_1 Gamma_2 tr(H - lambda)
/// and D+- = prod_v (H_vv - lambda +- i Gamma_v).
Complex closed_form_two_star(const HermitianMatrix& h, Complex lambda, Complex z);

/// The four zeros in z of the two-star determinant at fixed lambda.
std::vector<Complex> two_star_roots(const HermitianMatrix& h, Complex lambda);

}  // namespace hermtrace
