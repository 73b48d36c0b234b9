#pragma once

#include <span>
#include <string>
#include <vector>

#include "hermtrace/matrix_model.hpp"
#include "hermtrace/types.hpp"
#include "hermtrace/wide.hpp"

namespace hermtrace {

/// Truncation of the double sum over repetitions n and powers s.
struct CutoffPolicy {
    double epsilon = 0.1;
    int n_max = 10;
    int s_max = 90;

    /// Smallest admissible cutoffs for this epsilon: n_max = ceil(1/epsilon),
    /// s_max = 9 n_max.
    static CutoffPolicy minimal(double epsilon);
    /// Throws ConfigError unless epsilon > 0, n_max >= ceil(1/epsilon) and
    /// s_max >= 9 n_max.
    void validate() const;
};

struct CountingResult {
    std::vector<double> lambdas;
    std::vector<double> smooth;
    std::vector<double> oscillating;
    std::vector<double> total;
    std::string method;
    CutoffPolicy policy;
    Mode mode = Mode::Counting;
};

double smooth_count_I(const HermitianMatrix& h, double lambda);
double smooth_density_I(const HermitianMatrix& h);

/// Per-repetition coefficients a_n of the double sum, n = 1..n_max:
/// a_n = sum_{s<=s_max} (-i)^s tr H^s n^{s-1} / s!   (counting)
/// a_n = sum_{s<=s_max} (-i)^s tr H^s n^s / s!       (density)
/// The oscillating part at lambda is then (1/pi) Im|Re sum_n a_n e^{(i lambda - eps) n}.
/// The inner sums cancel heavily once n * rho is large, so they are
/// accumulated in 100-digit arithmetic whenever extended precision is not
/// enough; ConfigError if even that would lose the result.
struct DoubleSumCoefficients {
    Mode mode = Mode::Counting;
    int s_max = 0;
    std::vector<Complex> a;  // a[n-1]
    bool wide = false;       // accumulated in 100-digit arithmetic
};

/// `rho` bounds the spectral radius; it only selects the working precision.
DoubleSumCoefficients doublesum_coefficients(const HermitianMatrix& h, int n_max, int s_max, Mode mode, double rho);
/// Same from caller-supplied traces tr H^s, s = 0..s_max (e.g. asymptotic ones).
DoubleSumCoefficients doublesum_coefficients(std::span<const Wide> traces, int n_max, Mode mode, double rho);

/// (1/pi) Im or Re of sum_n a_n e^{(i lambda - eps) n}, compensated.
double doublesum_evaluate(const DoubleSumCoefficients& c, double lambda, double epsilon);

/// Oscillating part by the truncated double sum. Throws ConfigError when
/// the policy violates its invariants. A spectrum outside (-pi, pi) is
/// allowed; the result then describes the 2 pi periodized spectrum and
/// `outside_window` (if given) is set.
double osc_count_I_doublesum(const HermitianMatrix& h, double lambda, const CutoffPolicy& policy, Mode mode,
                             bool* outside_window = nullptr);

/// Oscillating part by the s-sum with polylogarithm weights
/// Li_{1-s}(e^{i lambda - eps}) (counting) or Li_{-s} (density).
/// Requires epsilon > max |lambda_j|; DomainError otherwise.
double osc_count_I_polylog(const HermitianMatrix& h, double lambda, double epsilon, int s_max, Mode mode);

enum class MethodI { DoubleSum, Polylog };

/// Grid evaluation sharing the traces; points are split over `threads`.
/// For MethodI::Polylog only policy.epsilon and policy.s_max are used.
CountingResult count_grid_I(const HermitianMatrix& h, std::span<const double> lambdas, const CutoffPolicy& policy,
                            MethodI method, Mode mode, int threads = 1);

// -- spectral averages --------------------------------------------------------

/// f(lambda) = sum_{|n|<=n_max} f_n e^{i n lambda} on (-pi, pi).
struct FourierTestFunction {
    int n_max = 0;
    std::vector<Complex> coeffs;  // coeffs[n + n_max]
    double decay_exponent = 0;    // claimed: |f_n| <= C e^{-decay_exponent |n|}

    [[nodiscard]] Complex coeff(int n) const;
    [[nodiscard]] Complex evaluate(double lambda) const;
    /// True when decay_exponent < pi: the average is then only formal.
    [[nodiscard]] bool formal_regime() const { return decay_exponent < kPi; }
    /// Largest e^{decay_exponent |n|} |f_n| over the supplied coefficients.
    [[nodiscard]] double decay_constant() const;

    static FourierTestFunction constant(double c);
    static FourierTestFunction heat_kernel(double beta, int n_max);
    static FourierTestFunction monomial(int m, int n_max);
    static FourierTestFunction from_coeffs(int n_max, std::vector<Complex> coeffs, double decay_exponent);
};

/// f_n of e^{-beta lambda}: (-1)^n sinh(beta pi) / (pi (beta + i n)).
Complex heat_kernel_coefficient(double beta, int n);
/// f_n of lambda^m, by repeated integration by parts.
Complex monomial_coefficient(int m, int n);

struct SpectralAverage {
    Complex value;
    bool formal = false;
};

/// Fourier side: f(0) + sum_{s=1}^{s_max} tr H^s / (N s!) sum_{n>=1} n^s (i^s f_n + (-i)^s f_{-n}).
/// Exact in the limit for trigonometric polynomials; only formal for
/// coefficients decaying like 1/n.
SpectralAverage spectral_average(const HermitianMatrix& h, const FourierTestFunction& f, int s_max);

/// Same sum with n^s rebuilt as (1/s!) sum_k A(s,k) sum_j alpha_j(s,k) n^j.
SpectralAverage spectral_average_alpha(const HermitianMatrix& h, const FourierTestFunction& f, int s_max);

/// Analytic-jet side: with f(lambda) = F(e^{i lambda}),
/// <f> = f(0) + sum_{s>=1} i^s tr H^s / (N (s!)^2) d^s/dz^s [A_s(z) F(z)]_{z=1}.
/// `jet[r]` must hold F^{(r)}(1) for r = 0..s_max. The s-th derivative
/// cancels down from roughly (s!)^2, hence the 240-digit jets.
using Jet = std::vector<WideComplex<Wider>>;
Complex spectral_average_jet(const HermitianMatrix& h, const Jet& jet, int s_max);

/// F^{(r)}(1) for F(z) = z^{i beta}, i.e. e^{-beta lambda}.
Jet heat_kernel_jet(double beta, int r_max);
/// F^{(r)}(1) for F(z) = (-i log z)^m, i.e. lambda^m.
Jet monomial_jet(int m, int r_max);

// -- semicircle ---------------------------------------------------------------

/// J_1 by its power series up to x = 25 and the Hankel asymptotic expansion beyond.
double bessel_j1(double x);

/// 1/2 + lambda/(2 pi) + (2/pi^2) sum_{n<=n_max} J_1(n pi) sin(n lambda) / n^2.
double semicircle_counting(double lambda, int n_max);
/// Integrated semicircle on [-pi, pi]; DomainError outside.
double semicircle_exact(double lambda);

/// Asymptotic normalized trace of H^{2p} for the rescaled ensemble:
/// (2p)! / (p! (p+1)!) (pi/2)^{2p}.
double catalan_trace(int p);
/// Normalized traces by power s = 0..s_max; odd powers vanish.
std::vector<Wide> catalan_traces(int s_max);

/// Coefficient of sin(n lambda) obtained by feeding the asymptotic traces
/// into the generic double sum; approaches 2 J_1(n pi) / (pi n)^2.
double semicircle_resummed_coefficient(int n, int s_max);

}  // namespace hermtrace
