#include <doctest.h>

#include "hermtrace/errors.hpp"
#include "hermtrace/trace_one.hpp"
#include "support.hpp"

using namespace hermtrace;
using namespace testsupport;

namespace {

const std::vector<double> kFig{-1.6, -1.4, 0.1, 2.8};

// Damped Fourier sum over eigenvalues, truncated at n_max.
double osc_oracle(const std::vector<double>& eig, double lambda, double eps, int n_max, Mode mode) {
    double acc = 0;
    for (double e : eig)
        for (int n = 1; n <= n_max; ++n) {
            const double damp = std::exp(-n * eps), x = n * (lambda - e);
            acc += mode == Mode::Counting ? damp * std::sin(x) / n : damp * std::cos(x);
        }
    return acc / kPi;
}

// Same sum with e^{-i n lambda_j} replaced by its Taylor polynomial of degree s_max.
double osc_oracle_truncated(const std::vector<double>& eig, double lambda, double eps, int n_max, int s_max, Mode mode) {
    using CLD = std::complex<long double>;
    CLD acc(0, 0);
    for (double e : eig)
        for (int n = 1; n <= n_max; ++n) {
            CLD term(1, 0), taylor(1, 0);
            const CLD x(0, -static_cast<long double>(n) * e);
            for (int s = 1; s <= s_max; ++s) {
                term *= x / static_cast<long double>(s);
                taylor += term;
            }
            const CLD a = mode == Mode::Counting ? taylor / static_cast<long double>(n) : taylor;
            acc += a * std::exp(CLD(-static_cast<long double>(n) * eps, static_cast<long double>(n) * lambda));
        }
    return static_cast<double>((mode == Mode::Counting ? acc.imag() : acc.real()) / kPi);
}

// Fully resummed oscillating part, the n_max -> infinity limit of osc_oracle.
double osc_closed(const std::vector<double>& eig, double lambda, double eps, Mode mode) {
    double acc = 0;
    for (double e : eig) {
        const Complex w = std::exp(Complex(-eps, lambda - e));
        acc += mode == Mode::Counting ? -std::arg(1.0 - w) : (w / (1.0 - w)).real();
    }
    return acc / kPi;
}

template <class F>
double simpson(F f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += f(a + i * h) * (i % 2 ? 4 : 2);
    return acc * h / 3;
}

template <class F>
Complex simpson_complex(F f, double a, double b, int panels) {
    return {simpson([&](double x) { return f(x).real(); }, a, b, panels),
            simpson([&](double x) { return f(x).imag(); }, a, b, panels)};
}

double bessel_series(double x) {
    double term = x / 2, acc = term;
    for (int k = 1; k < 60; ++k) {
        term *= -(x * x / 4) / (k * (k + 1.0));
        acc += term;
    }
    return acc;
}

}  // namespace

TEST_CASE("cutoff policy") {
    const auto p = CutoffPolicy::minimal(0.1);
    CHECK(p.n_max == 10);
    CHECK(p.s_max == 90);
    CHECK(CutoffPolicy::minimal(1.0 / 3).n_max == 3);
    CutoffPolicy bad{0.1, 10, 80};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {0.1, 9, 90};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {0.0, 10, 90};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("smooth part") {
    const auto fig = HermitianMatrix::diagonal(kFig);
    CHECK(smooth_count_I(fig, 0) == doctest::Approx(2 + 0.1 / (2 * kPi)));
    CHECK(smooth_count_I(HermitianMatrix::zero(5), 0) == doctest::Approx(2.5));
    CHECK(smooth_count_I(HermitianMatrix::zero(5), kPi) == doctest::Approx(5));
    CHECK(smooth_density_I(fig) == doctest::Approx(4 / (2 * kPi)));
}

TEST_CASE("doublesum: zero matrix gives the damped sawtooth") {
    const auto z = HermitianMatrix::zero(3);
    const CutoffPolicy p{0.1, 10, 90};
    CHECK(std::abs(osc_count_I_doublesum(z, 0, p, Mode::Counting)) < 1e-15);
    for (double l : {-2.5, -1.0, 0.4, 2.0})
        CHECK(osc_count_I_doublesum(z, l, p, Mode::Counting) ==
              doctest::Approx(osc_oracle({0, 0, 0}, l, 0.1, 10, Mode::Counting)).epsilon(1e-12));
}

TEST_CASE("doublesum against the eigenvalue Fourier oracle") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 8; ++trial) {
        const auto h = random_hermitian(2 + trial % 4, rng, 0.8);
        const auto eig = reference_eigenvalues(h);
        for (int n_max : {2, 5, 10, 20}) {
            const CutoffPolicy p = CutoffPolicy::minimal(1.0 / n_max);
            CutoffPolicy generous = p;
            generous.s_max = p.s_max + 60;
            for (Mode mode : {Mode::Counting, Mode::Density})
                for (double l : {-2.9, -0.7, 0.3, 1.9}) {
                    const double got = osc_count_I_doublesum(h, l, p, mode);
                    const double ref = n_max <= 5 ? osc_oracle_truncated(eig, l, p.epsilon, n_max, p.s_max, mode)
                                                  : osc_oracle(eig, l, p.epsilon, n_max, mode);
                    CHECK(std::abs(got - ref) < 1e-10);
                    const double converged = osc_count_I_doublesum(h, l, generous, mode);
                    CHECK(std::abs(converged - osc_oracle(eig, l, p.epsilon, n_max, mode)) < 1e-10);
                }
        }
    }
}

TEST_CASE("doublesum switches to wide precision when needed") {
    std::vector<double> d{-3.0, 3.0};
    const auto h = HermitianMatrix::diagonal(d);
    const auto c = doublesum_coefficients(h, 40, 360, Mode::Counting, 3.0);
    CHECK(c.wide);
    const auto eig = reference_eigenvalues(h);
    for (double l : {-1.0, 0.5}) CHECK(std::abs(doublesum_evaluate(c, l, 0.025) - osc_oracle(eig, l, 0.025, 40, Mode::Counting)) < 1e-10);
    const auto small = doublesum_coefficients(HermitianMatrix::diagonal(std::vector<double>{0.1}), 3, 27, Mode::Counting, 0.1);
    CHECK_FALSE(small.wide);
}

TEST_CASE("figure-one matrix at lambda = 2") {
    const auto fig = HermitianMatrix::diagonal(kFig);
    const CutoffPolicy p{0.1, 10, 90};
    const double total = smooth_count_I(fig, 2.0) + osc_count_I_doublesum(fig, 2.0, p, Mode::Counting);
    CHECK(std::abs(total - 3) < 0.15);
}

TEST_CASE("polylog path against the closed-form resummation") {
    const auto z = HermitianMatrix::zero(4);
    CHECK(std::abs(osc_count_I_polylog(z, 0, kPi, 60, Mode::Counting)) < 1e-15);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 6; ++trial) {
        const auto h = random_hermitian(2 + trial % 3, rng, 0.3);
        const auto eig = reference_eigenvalues(h);
        for (Mode mode : {Mode::Counting, Mode::Density})
            for (double l : {-2.0, 0.0, 1.1}) {
                const double got = osc_count_I_polylog(h, l, 2.5, 60, mode);
                CHECK(std::abs(got - osc_closed(eig, l, 2.5, mode)) < 1e-10);
            }
    }
}

TEST_CASE("polylog and doublesum agree where both converge") {
    const auto fig = HermitianMatrix::diagonal(kFig);
    const auto c = doublesum_coefficients(fig, 40, 60, Mode::Counting, 2.8);
    for (double l : {-2.2, -0.5, 0.9, 2.4}) {
        const double a = osc_count_I_polylog(fig, l, kPi, 60, Mode::Counting);
        CHECK(std::abs(a - doublesum_evaluate(c, l, kPi)) < 1e-8);
    }
}

TEST_CASE("polylog path requires epsilon beyond the spectral radius") {
    const auto fig = HermitianMatrix::diagonal(kFig);
    CHECK_THROWS_AS(osc_count_I_polylog(fig, 0, 0.01, 60, Mode::Counting), DomainError);
}

TEST_CASE("count_grid_I is independent of the thread count") {
    std::mt19937_64 rng(9);
    const auto h = random_hermitian(5, rng, 0.5);
    std::vector<double> grid;
    for (int k = 0; k < 97; ++k) grid.push_back(-3 + 6.0 * k / 96);
    const auto p = CutoffPolicy::minimal(0.2);
    const auto a = count_grid_I(h, grid, p, MethodI::DoubleSum, Mode::Counting, 1);
    const auto b = count_grid_I(h, grid, p, MethodI::DoubleSum, Mode::Counting, 4);
    CHECK(a.total == b.total);
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(a.total[k] == a.smooth[k] + a.oscillating[k]);
}

TEST_CASE("heat kernel and monomial Fourier coefficients against quadrature") {
    for (double beta : {0.1, 0.5, 1.0})
        for (int n : {-7, -1, 0, 2, 9}) {
            const Complex q = simpson_complex(
                [&](double x) { return std::exp(-beta * x) * std::exp(Complex(0, -n * x)) / (2 * kPi); }, -kPi, kPi,
                4096);
            CHECK(std::abs(heat_kernel_coefficient(beta, n) - q) < 1e-10);
        }
    for (int m = 0; m <= 4; ++m)
        for (int n : {-5, 0, 1, 6}) {
            const Complex q = simpson_complex(
                [&](double x) { return std::pow(x, m) * std::exp(Complex(0, -n * x)) / (2 * kPi); }, -kPi, kPi, 16384);
            CHECK(std::abs(monomial_coefficient(m, n) - q) < 1e-10);
        }
}

TEST_CASE("spectral average: constant function and the truncated Fourier route") {
    std::mt19937_64 rng(31);
    const auto h = random_hermitian(3, rng, 0.3);
    CHECK(std::abs(spectral_average(h, FourierTestFunction::constant(1), 40).value - 1.0) < 1e-14);

    const auto eig = reference_eigenvalues(h);
    const auto f = FourierTestFunction::heat_kernel(0.5, 20);
    Complex ref(0, 0);
    for (double e : eig) ref += f.evaluate(e);
    ref /= static_cast<double>(eig.size());
    const auto avg = spectral_average(h, f, 80);
    CHECK(avg.formal);
    CHECK(std::abs(avg.value - ref) < 1e-10);
    CHECK(std::abs(spectral_average_alpha(h, f, 80).value - ref) < 1e-10);
}

TEST_CASE("spectral average: jet route reproduces heat kernel and monomials") {
    const auto small = HermitianMatrix::diagonal(std::vector<double>{0.2, -0.3});
    const double ref = (std::exp(-0.5 * 0.2) + std::exp(0.5 * 0.3)) / 2;
    CHECK(std::abs(spectral_average_jet(small, heat_kernel_jet(0.5, 40), 40) - ref) < 1e-8);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        auto h = random_hermitian(2 + trial, rng);
        h = rescale_to_window(h, kPi - 0.9).matrix;
        const auto eig = reference_eigenvalues(h);
        const auto tr = trace_powers(h, 4);
        for (double beta : {0.1, 0.5, 1.0}) {
            double oracle = 0;
            for (double e : eig) oracle += std::exp(-beta * e);
            oracle /= h.n();
            CHECK(std::abs(spectral_average_jet(h, heat_kernel_jet(beta, 60), 60) - oracle) < 1e-6);
        }
        for (int m = 0; m <= 4; ++m)
            CHECK(std::abs(spectral_average_jet(h, monomial_jet(m, 60), 60) - tr[m] / static_cast<double>(h.n())) < 1e-6);
    }
}

TEST_CASE("bessel_j1") {
    CHECK(bessel_j1(0) == 0.0);
    CHECK(bessel_j1(kPi) == doctest::Approx(0.284615).epsilon(1e-5));
    CHECK(bessel_j1(2 * kPi) == doctest::Approx(-0.212383).epsilon(1e-5));
    for (double x = 0.1; x < 8; x += 0.37) CHECK(std::abs(bessel_j1(x) - bessel_series(x)) < 1e-13);
    for (double x = 0.5; x < 600; x *= 1.3) CHECK(std::abs(bessel_j1(x) - std::cyl_bessel_j(1.0, x)) < 1e-12);
}

TEST_CASE("semicircle: closed form against quadrature of the density") {
    const auto density = [](double x) { return 2 * std::sqrt(std::max(0.0, kPi * kPi - x * x)) / (kPi * kPi * kPi); };
    CHECK(semicircle_exact(0) == doctest::Approx(0.5));
    CHECK(semicircle_exact(kPi) == doctest::Approx(1.0));
    CHECK(semicircle_exact(-kPi) == doctest::Approx(0.0));
    for (double l : {-2.5, -1.0, 0.7, 2.9}) CHECK(std::abs(semicircle_exact(l) - simpson(density, -kPi, l, 20000)) < 1e-5);
    CHECK_THROWS_AS(semicircle_exact(4.0), DomainError);
}

TEST_CASE("semicircle: Fourier-Bessel series") {
    CHECK(semicircle_counting(0, 200) == 0.5);
    CHECK(std::abs(semicircle_counting(kPi / 2, 200) - semicircle_exact(kPi / 2)) < 1e-3);
    CHECK(std::abs(semicircle_counting(kPi, 2000) - 1.0) < 1e-3);
    double err1 = 0, err200 = 0;
    for (int k = 0; k <= 400; ++k) {
        const double l = kPi * (2 * k - 400) / 400.0;
        err1 = std::max(err1, std::abs(semicircle_counting(l, 1) - semicircle_exact(l)));
        err200 = std::max(err200, std::abs(semicircle_counting(l, 200) - semicircle_exact(l)));
    }
    CHECK(err200 < 2e-3);
    CHECK(err1 > err200);
}

TEST_CASE("catalan traces are the semicircle moments") {
    CHECK(catalan_trace(0) == 1.0);
    CHECK(catalan_trace(1) == doctest::Approx(kPi * kPi / 4));
    CHECK(catalan_trace(2) == doctest::Approx(2 * std::pow(kPi / 2, 4)));
    const auto density = [](double x) { return 2 * std::sqrt(std::max(0.0, kPi * kPi - x * x)) / (kPi * kPi * kPi); };
    for (int p = 0; p <= 5; ++p) {
        const double moment = simpson([&](double x) { return std::pow(x, 2 * p) * density(x); }, -kPi, kPi, 200000);
        CHECK(catalan_trace(p) == doctest::Approx(moment).epsilon(1e-6));
    }
}

TEST_CASE("resummed semicircle coefficients match the Bessel form") {
    for (int n : {1, 5, 20}) {
        const double ref = 2 * bessel_j1(n * kPi) / std::pow(n * kPi, 2);
        CHECK(std::abs(semicircle_resummed_coefficient(n, 320) - ref) < 1e-13);
    }
}
