#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hermtrace/types.hpp"

namespace hermtrace {

/// Dense complex Hermitian matrix. Immutable once constructed; every
/// factory checks hermiticity and then stores (M + M^dagger) / 2 so the
/// stored entries are exactly Hermitian.
class HermitianMatrix {
public:
    static constexpr double kDefaultTolerance = 1e-8;

    /// Throws ArgumentError naming the worst offending (i, j) pair when
    /// |M_ij - conj(M_ji)| exceeds tol * max(1, max|M|).
    static HermitianMatrix from_dense(const CMatrix& m, double tol = kDefaultTolerance);
    static HermitianMatrix diagonal(std::span<const double> values);
    static HermitianMatrix zero(int n);

    [[nodiscard]] int n() const { return static_cast<int>(m_.rows()); }
    [[nodiscard]] const CMatrix& entries() const { return m_; }
    [[nodiscard]] Complex operator()(int i, int j) const { return m_(i, j); }
    [[nodiscard]] double diag(int v) const { return m_(v, v).real(); }

    /// Frobenius norm.
    [[nodiscard]] double norm() const { return m_.norm(); }
    [[nodiscard]] HermitianMatrix scaled(double c) const;

private:
    explicit HermitianMatrix(CMatrix m) : m_(std::move(m)) {}
    CMatrix m_;
};

// -- file formats -----------------------------------------------------------

/// Parses `{"n": N, "entries": [[i, j, re, im], ...]}` (0-based indices).
/// Missing conjugate entries are mirrored; a duplicated (i, j) is an error.
HermitianMatrix load_matrix(std::string_view json_text);
HermitianMatrix load_matrix_file(const std::filesystem::path& path);

/// Serializes the upper triangle (including the diagonal) of nonzero entries.
std::string dump_matrix(const HermitianMatrix& h);

/// One eigenvalue per line with 17 significant digits.
std::string eigenvalues_csv(std::span<const double> eigenvalues);

// -- spectral oracle ----------------------------------------------------------

struct EigenDecomposition {
    std::vector<double> values;  // nondecreasing
    CMatrix vectors;             // column j pairs with values[j]
};

/// All eigenvalues, nondecreasing. Cyclic Jacobi rotations on the 2N x 2N
/// real symmetric embedding [[Re H, -Im H], [Im H, Re H]], whose spectrum is
/// that of H with every eigenvalue doubled.
std::vector<double> eig_hermitian(const HermitianMatrix& h);
EigenDecomposition eig_hermitian_vectors(const HermitianMatrix& h);

/// max_j ||H x_j - lambda_j x_j|| / max(||H||, 1).
double eigen_residual(const HermitianMatrix& h, const EigenDecomposition& dec);

/// Number of eigenvalues <= lambda (closed convention at jumps).
int counting_exact(std::span<const double> sorted_eigenvalues, double lambda);

/// pi - max |lambda_j|.
double gap(const HermitianMatrix& h);
double gap_from_eigenvalues(std::span<const double> sorted_eigenvalues);

struct RescaleResult {
    HermitianMatrix matrix;
    double scale = 1.0;
    bool zero_matrix = false;  // set when H == 0; scale is then 1
};

/// Returns c H with max |lambda(c H)| = pi - target_gap, target_gap in (0, pi).
RescaleResult rescale_to_window(const HermitianMatrix& h, double target_gap);

/// tr H^s for s = 0 .. s_max by running matrix products. Imaginary leakage
/// above 1e-10 relative is treated as a logic error; the returned values
/// have their imaginary parts truncated to zero.
std::vector<Complex> trace_powers(const HermitianMatrix& h, int s_max);

/// Same traces accumulated in extended precision, real parts only.
std::vector<long double> trace_powers_ld(const HermitianMatrix& h, int s_max);

// -- associated graphs --------------------------------------------------------

/// Directed edge (head, tail): the amplitude travelling from `tail` to `head`.
struct DirectedEdge {
    int head = 0;
    int tail = 0;
    friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

struct AssociatedGraphs {
    int n = 0;
    std::vector<std::vector<int>> adjacency_I;   // loops allowed
    std::vector<std::vector<int>> adjacency_II;  // simple
    std::vector<std::vector<int>> neighborhoods; // sorted E_v
    std::vector<int> degrees;
    std::vector<DirectedEdge> directed_edges;    // lexicographic in (head, tail)
    std::vector<int> reverse;                    // involution on edge indices
    int edge_count = 0;                          // E

    /// Index of directed edge (head, tail), or -1.
    [[nodiscard]] int edge_index(int head, int tail) const;
    /// Position of w inside neighborhoods[v], or -1.
    [[nodiscard]] int neighbor_slot(int v, int w) const;

    std::vector<int> edge_lookup;  // n*n, row-major (head, tail)
};

/// H_vw = h_vw exp(2 i gamma_vw) on every retained edge.
struct EdgePhases {
    RMatrix h;      // symmetric, nonnegative
    RMatrix gamma;  // antisymmetric, in [-pi/2, pi/2]
};

struct GershgorinData {
    std::vector<double> centers;
    std::vector<double> radii;
};

struct GraphData {
    AssociatedGraphs graphs;
    EdgePhases phases;
    GershgorinData gershgorin;
};

/// Entries with |H_vw| <= zero_threshold count as structural zeros.
GraphData build_graphs(const HermitianMatrix& h, double zero_threshold = 0.0);

}  // namespace hermtrace
