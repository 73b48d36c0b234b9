#include <doctest.h>

#include "hermtrace/errors.hpp"
#include "hermtrace/scattering.hpp"
#include "support.hpp"

using namespace hermtrace;
using namespace testsupport;

namespace {

const Complex I(0, 1);

// Half-phase of H_vw with the real-negative tie rule.
double half_phase(Complex hvw, int v, int w) {
    if (hvw.imag() == 0 && hvw.real() < 0) return v >= w ? kPi / 2 : -kPi / 2;
    return std::arg(hvw) / 2;
}

std::vector<int> neighbors(const HermitianMatrix& h, int v) {
    std::vector<int> out;
    for (int w = 0; w < h.n(); ++w)
        if (w != v && h(v, w) != Complex(0, 0)) out.push_back(w);
    return out;
}

CMatrix sigma(const HermitianMatrix& h, int v, Complex lambda) {
    const auto nb = neighbors(h, v);
    const int d = static_cast<int>(nb.size());
    CVector c(d);
    double gamma = 0;
    for (int i = 0; i < d; ++i) {
        const Complex hvw = h(v, nb[i]);
        c(i) = std::sqrt(std::abs(hvw)) * std::exp(-I * half_phase(hvw, v, nb[i]));
        gamma += std::abs(hvw);
    }
    return I * CMatrix::Identity(d, d) - 2.0 / (h.diag(v) - lambda - I * gamma) * c * c.adjoint();
}

// Edge (v <- w) in lexicographic order of (v, w).
CMatrix assemble_oracle(const HermitianMatrix& h, Complex lambda) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < h.n(); ++v)
        for (int w : neighbors(h, v)) edges.emplace_back(v, w);
    const int m = static_cast<int>(edges.size());
    CMatrix s = CMatrix::Zero(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const auto [vp, v] = edges[a];
            const auto [v2, w] = edges[b];
            if (v != v2) continue;
            const auto nb = neighbors(h, v);
            const int row = static_cast<int>(std::find(nb.begin(), nb.end(), vp) - nb.begin());
            const int col = static_cast<int>(std::find(nb.begin(), nb.end(), w) - nb.begin());
            s(a, b) = sigma(h, v, lambda)(row, col);
        }
    return s;
}

Complex zeta_ii_oracle(const HermitianMatrix& h, Complex lambda) {
    Complex denom(1, 0);
    int edges = 0;
    for (int v = 0; v < h.n(); ++v) {
        double gamma = 0;
        for (int w : neighbors(h, v)) {
            gamma += std::abs(h(v, w));
            if (w > v) ++edges;
        }
        denom *= h.diag(v) - lambda - I * gamma;
    }
    const CMatrix shifted = h.entries() - lambda * CMatrix::Identity(h.n(), h.n());
    return std::pow(2.0, edges) * shifted.determinant() / denom;
}

double wrap2(double x) { return x - 2 * std::round(x / 2); }

}  // namespace

TEST_CASE("coupling vectors") {
    const ScatteringSystem px(pauli_x());
    CHECK(std::abs(px.coupling_vector(0)(0) - 1.0) < 1e-15);
    CMatrix m(2, 2);
    m << 0, -1, -1, 0;
    const ScatteringSystem neg(HermitianMatrix::from_dense(m));
    CHECK(std::abs(neg.coupling_vector(0)(0) - I) < 1e-15);
    const ScatteringSystem star(two_star(1, 1));
    CHECK(star.coupling_vector(0).squaredNorm() == doctest::Approx(2.0));
    const ScatteringSystem iso(HermitianMatrix::diagonal(std::vector<double>{1, 2}));
    CHECK_THROWS_AS(iso.coupling_vector(0), StructureError);
}

TEST_CASE("vertex scattering: spot values, unitarity and the pole") {
    const ScatteringSystem px(pauli_x());
    const auto s = px.vertex_scattering(0, 0.0).matrix;
    REQUIRE(s.rows() == 1);
    CHECK(std::abs(s(0, 0) + I) < 1e-15);

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = random_hermitian(2 + trial % 5, rng);
        const ScatteringSystem sys(h);
        for (int v = 0; v < h.n(); ++v) {
            const double l = 3 * std::uniform_real_distribution<double>(-1, 1)(rng);
            const CMatrix sv = sys.vertex_scattering(v, l).matrix;
            CHECK((sv.adjoint() * sv - CMatrix::Identity(sv.rows(), sv.cols())).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((sv - sigma(h, v, l)).cwiseAbs().maxCoeff() < 1e-13);
        }
    }
    const Complex pole(0.0, -1.0);
    CHECK_THROWS_AS(px.vertex_scattering(0, pole), SingularityError);
}

TEST_CASE("assembled operator") {
    const ScatteringSystem px(pauli_x());
    const CMatrix s = px.assemble(0.0).matrix;
    CMatrix expect(2, 2);
    expect << 0, -I, -I, 0;
    CHECK((s - expect).cwiseAbs().maxCoeff() < 1e-15);

    const ScatteringSystem star(two_star(1, 1));
    const CMatrix st = star.assemble(0.4).matrix;
    REQUIRE(st.rows() == 4);
    const auto& edges = star.graph().graphs.directed_edges;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (edges[b].head != edges[a].tail) CHECK(st(a, b) == Complex(0, 0));

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = random_hermitian(2 + trial % 5, rng);
        const ScatteringSystem sys(h);
        const Complex l(std::uniform_real_distribution<double>(-2, 2)(rng), 0.3);
        CHECK((sys.assemble(l).matrix - assemble_oracle(h, l)).cwiseAbs().maxCoeff() < 1e-13);
        const CMatrix real = sys.assemble(l.real()).matrix;
        CHECK((real.adjoint() * real - CMatrix::Identity(real.rows(), real.cols())).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(std::abs(real.determinant()) - 1.0) < 1e-12);
    }
}

TEST_CASE("spectral determinant and factorization") {
    const ScatteringSystem px(pauli_x());
    CHECK(std::abs(px.spectral_det(0.0) - 2.0) < 1e-14);
    CHECK(px.factorization_residual(0.0) < 1e-14);
    CHECK(std::abs(px.spectral_det(1e7) - 2.0) < 1e-5);

    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = random_hermitian(2 + trial % 5, rng);
        const ScatteringSystem sys(h);
        CHECK(std::abs(sys.spectral_det(Complex(u(rng), u(rng)), 0.0) - 1.0) < 1e-15);
        for (int k = 0; k < 5; ++k) {
            const Complex l(u(rng), u(rng));
            const Complex ref = zeta_ii_oracle(h, l);
            CHECK(std::abs(sys.spectral_det(l) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
            CHECK(sys.factorization_residual(l) < 1e-9);
            const Complex z(u(rng) / 2, u(rng) / 2);
            const CMatrix s = assemble_oracle(h, l);
            const Complex dz = (CMatrix::Identity(s.rows(), s.cols()) - z * s).determinant();
            CHECK(std::abs(sys.spectral_det(l, z) - dz) <= 1e-10 * std::max(1.0, std::abs(dz)));
        }
        for (double e : reference_eigenvalues(h)) CHECK(std::abs(sys.spectral_det(e)) < 1e-9 * std::max(1.0, h.norm()));
    }
}

TEST_CASE("determinant closed form and functional equation") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = random_hermitian(2 + trial % 5, rng);
        const ScatteringSystem sys(h);
        for (double l : {-1.7, -0.2, 0.9, 2.5}) {
            const Complex det = sys.assemble(l).matrix.determinant();
            CHECK(std::abs(sys.det_closed_form(l) - det) < 1e-10);
            CHECK(sys.functional_equation_residual(l) < 1e-10);
        }
    }
}

TEST_CASE("edgeless systems") {
    const ScatteringSystem iso(HermitianMatrix::diagonal(std::vector<double>{-0.5, 1.0}));
    CHECK(iso.edge_count() == 0);
    CHECK(iso.spectral_det(0.3) == Complex(1, 0));
    CHECK(iso.smooth_count(-1.0) == 0.0);
    CHECK(iso.smooth_count(0.0) == 1.0);
    CHECK(iso.smooth_count(1.0) == 2.0);
    CHECK(iso.osc_count(0.0, 1e-4, 10, OscMethodII::Eigenphase) == 0.0);
}

TEST_CASE("smooth counting part") {
    const ScatteringSystem px(pauli_x());
    CHECK(px.smooth_count(0.0) == doctest::Approx(1.0));
    std::mt19937_64 rng(29);
    const auto h = random_hermitian(5, rng);
    const ScatteringSystem sys(h);
    CHECK(sys.smooth_count(-1e9) < 1e-8);
    CHECK(sys.smooth_count(1e9) > 5 - 1e-8);
    // The density is the derivative of the counting part.
    for (double l : {-1.0, 0.2, 1.4}) {
        const double dh = 1e-5;
        const double fd = (sys.smooth_count(l + dh) - sys.smooth_count(l - dh)) / (2 * dh);
        CHECK(sys.smooth_count(l, Mode::Density) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("oscillating part: interval and zero-order trace sum") {
    const ScatteringSystem px(pauli_x());
    const double osc = px.osc_count(0.0, 1e-4, 0, OscMethodII::Eigenphase);
    CHECK(std::abs(osc) < 1e-3);
    CHECK(std::abs(px.smooth_count(0.0) + osc - 1.0) < 1e-3);
    CHECK(px.osc_count(0.3, 0.1, 0, OscMethodII::TraceSum) == 0.0);
}

TEST_CASE("oscillating part matches the phase of the factorized determinant") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = random_hermitian(2 + trial % 5, rng);
        const ScatteringSystem sys(h);
        for (double l : {-1.3, 0.1, 1.2}) {
            const double eps = 0.05;
            const double osc = sys.osc_count(l, eps, 0, OscMethodII::Eigenphase);
            const double phase = -std::arg(zeta_ii_oracle(h, Complex(l, eps))) / kPi;
            CHECK(std::abs(wrap2(osc - phase)) < 1e-10);
        }
    }
}

TEST_CASE("eigenphase and trace-sum methods agree at moderate epsilon") {
    std::mt19937_64 rng(41);
    const auto h = random_hermitian(4, rng);
    const ScatteringSystem sys(h);
    for (double l : {-1.0, 0.0, 1.5}) {
        const double a = sys.osc_count(l, 0.3, 0, OscMethodII::Eigenphase);
        const double b = sys.osc_count(l, 0.3, 400, OscMethodII::TraceSum);
        CHECK(std::abs(a - b) < 1e-10);
    }
}

TEST_CASE("total counting function reproduces the staircase") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 5;
        const auto h = random_hermitian(n, rng);
        const auto eig = reference_eigenvalues(h);
        const ScatteringSystem sys(h);
        std::vector<double> grid;
        for (int k = 0; k < 121; ++k) grid.push_back(-4 + 8.0 * k / 120);
        const auto res = count_grid_II(sys, grid, 1e-4, OscMethodII::Eigenphase);
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (min_distance(eig, grid[k]) > 0.05) CHECK(std::abs(res.total[k] - staircase(eig, grid[k])) < 1e-3);
        const auto ends = count_grid_II(sys, std::vector<double>{-50, 50}, 1e-4, OscMethodII::Eigenphase);
        CHECK(std::abs(ends.total[1] - ends.total[0] - n) < 1e-3);
    }
}

TEST_CASE("count_grid_II is independent of the thread count") {
    std::mt19937_64 rng(47);
    const ScatteringSystem sys(random_hermitian(4, rng));
    std::vector<double> grid;
    for (int k = 0; k < 61; ++k) grid.push_back(-3 + 0.1 * k);
    const auto a = count_grid_II(sys, grid, 1e-3, OscMethodII::Eigenphase, 0, 1);
    const auto b = count_grid_II(sys, grid, 1e-3, OscMethodII::Eigenphase, 0, 3);
    CHECK(a.total == b.total);
    CHECK_THROWS_AS(count_grid_II(sys, std::vector<double>{1, 0}, 1e-3, OscMethodII::Eigenphase), ArgumentError);
}

TEST_CASE("markov matrix is bistochastic") {
    const ScatteringSystem px(pauli_x());
    RMatrix expect(2, 2);
    expect << 0, 1, 1, 0;
    CHECK((px.markov_matrix(0.0) - expect).cwiseAbs().maxCoeff() < 1e-15);
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        const ScatteringSystem sys(random_hermitian(3 + trial, rng));
        const RMatrix m = sys.markov_matrix(0.37);
        CHECK((m.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
        CHECK((m.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-10);
    }
    const ScatteringSystem star(two_star(1, 0.5));
    const RMatrix m = star.markov_matrix(0.2);
    CHECK((m.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("closed forms: interval") {
    const auto px = pauli_x();
    CHECK(std::abs(closed_form_interval(px, 0.0, 1.0) - 2.0) < 1e-15);
    CHECK(std::abs(closed_form_interval(px, 0.3, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(closed_form_interval(px, 1.0, 1.0)) < 1e-14);
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto h = random_hermitian(2, rng);
        const ScatteringSystem sys(h);
        const Complex l(u(rng), u(rng)), z(u(rng), u(rng));
        const Complex ref = sys.spectral_det(l, z);
        CHECK(std::abs(closed_form_interval(h, l, z) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("closed forms: two-star and its roots") {
    const auto star = two_star(1, 1);
    CHECK(std::abs(closed_form_two_star(star, 0.0, 1.0)) < 1e-14);
    CHECK(std::abs(closed_form_two_star(star, 0.4, 0.0) - 1.0) < 1e-15);
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix m = CMatrix::Zero(3, 3);
        for (int v = 0; v < 3; ++v) m(v, v) = u(rng);
        m(0, 1) = Complex(u(rng), u(rng));
        m(0, 2) = Complex(u(rng), u(rng));
        m(1, 0) = std::conj(m(0, 1));
        m(2, 0) = std::conj(m(0, 2));
        const auto h = HermitianMatrix::from_dense(m);
        const ScatteringSystem sys(h);
        const Complex l(u(rng), u(rng)), z(u(rng), u(rng));
        const Complex ref = sys.spectral_det(l, z);
        CHECK(std::abs(closed_form_two_star(h, l, z) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        const auto roots = two_star_roots(h, l);
        CHECK(roots.size() == 4);
        for (const Complex r : roots) CHECK(std::abs(sys.spectral_det(l, r)) < 1e-9);
    }
    CHECK_THROWS(closed_form_two_star(pauli_x(), 0.0, 1.0));
}
