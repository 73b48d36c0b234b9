#include "hermtrace/trace_one.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/math/constants/constants.hpp>

#include "hermtrace/combinatorics.hpp"
#include "hermtrace/errors.hpp"
#include "hermtrace/kahan.hpp"

namespace hermtrace {

namespace {

int ceil_inverse(double epsilon) { return std::max(1, static_cast<int>(std::ceil(1.0 / epsilon - 1e-9))); }

double spectral_radius(std::span<const double> eigs) {
    return std::max(std::abs(eigs.front()), std::abs(eigs.back()));
}

// log of the largest term (n rho)^s / s! with s <= s_max
double log_peak_term(int n_max, int s_max, double rho) {
    const double x = n_max * rho;
    if (x <= 0) return 0;
    double best = 0;
    for (int s = 0; s <= s_max; ++s) best = std::max(best, s * std::log(x) - std::lgamma(s + 1.0));
    return best;
}

template <class R>
std::vector<WideComplex<R>> traces_in(const HermitianMatrix& h, int s_max) {
    using C = WideComplex<R>;
    const int n = h.n();
    std::vector<C> hm(static_cast<std::size_t>(n) * n), pw(hm.size()), next(hm.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            hm[i * n + j] = C(R(h(i, j).real()), R(h(i, j).imag()));
            pw[i * n + j] = C(R(i == j ? 1 : 0), R(0));
        }
    std::vector<C> out(static_cast<std::size_t>(s_max) + 1);
    out[0] = C(R(n), R(0));
    for (int s = 1; s <= s_max; ++s) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                C acc;
                for (int k = 0; k < n; ++k) acc += hm[i * n + k] * pw[k * n + j];
                next[i * n + j] = acc;
            }
        std::swap(pw, next);
        C tr;
        for (int i = 0; i < n; ++i) tr += pw[i * n + i];
        out[s] = tr;
    }
    return out;
}

template <class R>
std::vector<Complex> coefficients_from(const std::vector<WideComplex<R>>& traces, int n_max, Mode mode) {
    using C = WideComplex<R>;
    const int s_max = static_cast<int>(traces.size()) - 1;
    std::vector<Complex> a(n_max);
    for (int n = 1; n <= n_max; ++n) {
        C term(R(1), R(0));
        C acc = traces[0];
        for (int s = 1; s <= s_max; ++s) {
            term = term * C(R(0), R(-n) / s);
            acc += term * traces[s];
        }
        if (mode == Mode::Counting) acc = acc * (R(1) / n);
        a[n - 1] = Complex(static_cast<double>(acc.re), static_cast<double>(acc.im));
    }
    return a;
}

// Decimal digits that the inner sums lose to cancellation.
double lost_digits(int n_max, int s_max, double rho, int dim) {
    return (log_peak_term(n_max, s_max, rho) + std::log(std::max(dim, 1))) / std::log(10.0);
}

}  // namespace

// ---------------------------------------------------------------------------

CutoffPolicy CutoffPolicy::minimal(double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw ConfigError("cutoff policy: epsilon must be positive");
    const int n = ceil_inverse(epsilon);
    return {epsilon, n, 9 * n};
}

void CutoffPolicy::validate() const {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw ConfigError("cutoff policy: epsilon must be positive");
    if (n_max < ceil_inverse(epsilon)) {
        throw ConfigError("cutoff policy: n_max = " + std::to_string(n_max) + " below ceil(1/epsilon) = " +
                          std::to_string(ceil_inverse(epsilon)));
    }
    if (s_max < 9 * n_max) {
        throw ConfigError("cutoff policy: s_max = " + std::to_string(s_max) + " below 9 n_max = " +
                          std::to_string(9 * n_max));
    }
}

double smooth_count_I(const HermitianMatrix& h, double lambda) {
    const double tr = h.entries().trace().real();
    return (h.n() * lambda - tr) / (2 * kPi) + h.n() / 2.0;
}

double smooth_density_I(const HermitianMatrix& h) { return h.n() / (2 * kPi); }

DoubleSumCoefficients doublesum_coefficients(const HermitianMatrix& h, int n_max, int s_max, Mode mode,
                                             double rho) {
    if (n_max < 1 || s_max < 0) throw ArgumentError("doublesum_coefficients: need n_max >= 1, s_max >= 0");
    const double lost = lost_digits(n_max, s_max, rho, h.n());
    DoubleSumCoefficients out;
    out.mode = mode;
    out.s_max = s_max;
    if (lost <= 3) {
        out.a = coefficients_from(traces_in<long double>(h, s_max), n_max, mode);
    } else if (lost <= 80) {
        out.a = coefficients_from(traces_in<Wide>(h, s_max), n_max, mode);
        out.wide = true;
    } else {
        throw ConfigError("doublesum: cancellation of about 1e" + std::to_string(static_cast<int>(lost)) +
                          " exceeds the working precision; lower n_max or s_max");
    }
    return out;
}

DoubleSumCoefficients doublesum_coefficients(std::span<const Wide> traces, int n_max, Mode mode, double rho) {
    if (n_max < 1 || traces.empty()) throw ArgumentError("doublesum_coefficients: need n_max >= 1 and traces");
    const int s_max = static_cast<int>(traces.size()) - 1;
    const double lost = lost_digits(n_max, s_max, rho, static_cast<int>(std::ceil(static_cast<double>(traces[0]))));
    if (lost > 80) throw ConfigError("doublesum: cancellation exceeds the working precision");
    std::vector<WideComplex<Wide>> t(traces.size());
    for (std::size_t s = 0; s < traces.size(); ++s) t[s] = WideComplex<Wide>(traces[s], Wide(0));
    DoubleSumCoefficients out;
    out.mode = mode;
    out.s_max = s_max;
    out.a = coefficients_from(t, n_max, mode);
    out.wide = true;
    return out;
}

double doublesum_evaluate(const DoubleSumCoefficients& c, double lambda, double epsilon) {
    KahanSum<Complex> acc;
    for (std::size_t k = 0; k < c.a.size(); ++k) {
        const double n = static_cast<double>(k + 1);
        acc += c.a[k] * std::exp(Complex(-epsilon * n, lambda * n));
    }
    const Complex v = acc.value();
    return (c.mode == Mode::Counting ? v.imag() : v.real()) / kPi;
}

double osc_count_I_doublesum(const HermitianMatrix& h, double lambda, const CutoffPolicy& policy, Mode mode,
                             bool* outside_window) {
    policy.validate();
    const auto eigs = eig_hermitian(h);
    const double rho = spectral_radius(eigs);
    if (outside_window) *outside_window = rho >= kPi;
    const auto c = doublesum_coefficients(h, policy.n_max, policy.s_max, mode, rho);
    return doublesum_evaluate(c, lambda, policy.epsilon);
}

namespace {

struct PolylogPlan {
    std::vector<long double> traces;
    double epsilon;
    Mode mode;
};

PolylogPlan plan_polylog(const HermitianMatrix& h, double epsilon, int s_max, Mode mode) {
    if (s_max < 0 || s_max > kDefaultEulerianOrder) {
        throw ArgumentError("polylog: s_max must lie in 0.." + std::to_string(kDefaultEulerianOrder));
    }
    const auto eigs = eig_hermitian(h);
    const double rho = spectral_radius(eigs);
    if (!(epsilon > rho)) {
        throw DomainError("polylog: epsilon = " + std::to_string(epsilon) +
                          " must exceed max|lambda_j| = " + std::to_string(rho));
    }
    return {trace_powers_ld(h, s_max), epsilon, mode};
}

double polylog_evaluate(const PolylogPlan& p, double lambda) {
    const Complex z = std::exp(Complex(-p.epsilon, lambda));
    const int s_max = static_cast<int>(p.traces.size()) - 1;
    KahanSum<Complex> acc;
    Complex phase(1, 0);
    for (int s = 0; s <= s_max; ++s) {
        const double tr = static_cast<double>(p.traces[s]);
        Complex w;
        if (p.mode == Mode::Counting) {
            w = s == 0 ? polylog_one(z) : polylog_neg_normalized(s - 1, z) / static_cast<double>(s);
        } else {
            w = polylog_neg_normalized(s, z);
        }
        acc += phase * tr * w;
        phase *= Complex(0, -1);
    }
    const Complex v = acc.value();
    return (p.mode == Mode::Counting ? v.imag() : v.real()) / kPi;
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

double osc_count_I_polylog(const HermitianMatrix& h, double lambda, double epsilon, int s_max, Mode mode) {
    return polylog_evaluate(plan_polylog(h, epsilon, s_max, mode), lambda);
}

CountingResult count_grid_I(const HermitianMatrix& h, std::span<const double> lambdas, const CutoffPolicy& policy,
                            MethodI method, Mode mode, int threads) {
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas[i - 1])) throw ArgumentError("count_grid_I: grid must be strictly increasing");
    }
    CountingResult r;
    r.lambdas.assign(lambdas.begin(), lambdas.end());
    r.policy = policy;
    r.mode = mode;
    const std::size_t m = lambdas.size();
    r.smooth.resize(m);
    r.oscillating.resize(m);
    r.total.resize(m);

    if (method == MethodI::DoubleSum) {
        policy.validate();
        const auto eigs = eig_hermitian(h);
        const auto c = doublesum_coefficients(h, policy.n_max, policy.s_max, mode, spectral_radius(eigs));
        r.method = "doublesum";
        parallel_for(m, threads, [&](std::size_t i) { r.oscillating[i] = doublesum_evaluate(c, lambdas[i], policy.epsilon); });
    } else {
        const auto plan = plan_polylog(h, policy.epsilon, policy.s_max, mode);
        r.method = "polylog";
        parallel_for(m, threads, [&](std::size_t i) { r.oscillating[i] = polylog_evaluate(plan, lambdas[i]); });
    }
    for (std::size_t i = 0; i < m; ++i) {
        r.smooth[i] = mode == Mode::Counting ? smooth_count_I(h, lambdas[i]) : smooth_density_I(h);
        r.total[i] = r.smooth[i] + r.oscillating[i];
    }
    return r;
}

// ---------------------------------------------------------------------------
// Spectral averages

Complex FourierTestFunction::coeff(int n) const {
    if (n < -n_max || n > n_max) return {0, 0};
    return coeffs[static_cast<std::size_t>(n + n_max)];
}

Complex FourierTestFunction::evaluate(double lambda) const {
    KahanSum<Complex> acc;
    for (int n = -n_max; n <= n_max; ++n) acc += coeff(n) * std::exp(Complex(0, n * lambda));
    return acc.value();
}

double FourierTestFunction::decay_constant() const {
    double c = 0;
    for (int n = -n_max; n <= n_max; ++n) c = std::max(c, std::exp(decay_exponent * std::abs(n)) * std::abs(coeff(n)));
    return c;
}

FourierTestFunction FourierTestFunction::constant(double c) { return from_coeffs(0, {Complex(c, 0)}, kPi); }

FourierTestFunction FourierTestFunction::from_coeffs(int n_max, std::vector<Complex> coeffs, double decay_exponent) {
    if (n_max < 0 || coeffs.size() != static_cast<std::size_t>(2 * n_max + 1)) {
        throw ArgumentError("FourierTestFunction: need 2 n_max + 1 coefficients");
    }
    return {n_max, std::move(coeffs), decay_exponent};
}

Complex heat_kernel_coefficient(double beta, int n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * std::sinh(beta * kPi) / (kPi * Complex(beta, n));
}

Complex monomial_coefficient(int m, int n) {
    if (m < 0) throw ArgumentError("monomial_coefficient: m must be >= 0");
    if (n == 0) return {m % 2 == 0 ? std::pow(kPi, m) / (m + 1) : 0.0, 0.0};
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const Complex in(0, n);
    Complex integral(0, 0);  // I_0 = int e^{-i n x} dx = 0
    for (int j = 1; j <= m; ++j) {
        const double boundary = std::pow(kPi, j) - std::pow(-kPi, j);
        integral = sign * boundary / (-in) + (static_cast<double>(j) / in) * integral;
    }
    return integral / (2 * kPi);
}

FourierTestFunction FourierTestFunction::heat_kernel(double beta, int n_max) {
    std::vector<Complex> c(2 * n_max + 1);
    for (int n = -n_max; n <= n_max; ++n) c[n + n_max] = heat_kernel_coefficient(beta, n);
    return from_coeffs(n_max, std::move(c), 0.0);
}

FourierTestFunction FourierTestFunction::monomial(int m, int n_max) {
    std::vector<Complex> c(2 * n_max + 1);
    for (int n = -n_max; n <= n_max; ++n) c[n + n_max] = monomial_coefficient(m, n);
    return from_coeffs(n_max, std::move(c), 0.0);
}

namespace {

Complex i_pow(int s) {
    switch (((s % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

template <class Weight>
SpectralAverage fourier_side(const HermitianMatrix& h, const FourierTestFunction& f, int s_max, Weight&& weight) {
    if (s_max < 0) throw ArgumentError("spectral_average: s_max must be >= 0");
    const auto traces = trace_powers_ld(h, s_max);
    KahanSum<Complex> acc;
    acc += f.evaluate(0.0);
    for (int s = 1; s <= s_max; ++s) {
        KahanSum<Complex> inner;
        for (int n = 1; n <= f.n_max; ++n) {
            inner += weight(s, n) * (i_pow(s) * f.coeff(n) + i_pow(-s) * f.coeff(-n));
        }
        acc += static_cast<double>(traces[s]) / h.n() * inner.value();
    }
    return {acc.value(), f.formal_regime()};
}

}  // namespace

SpectralAverage spectral_average(const HermitianMatrix& h, const FourierTestFunction& f, int s_max) {
    return fourier_side(h, f, s_max, [](int s, int n) {
        return std::exp(s * std::log(static_cast<double>(n)) - std::lgamma(s + 1.0));
    });
}

SpectralAverage spectral_average_alpha(const HermitianMatrix& h, const FourierTestFunction& f, int s_max) {
    const auto& table = eulerian_table();
    if (s_max > table.max_order()) throw ArgumentError("spectral_average_alpha: s_max too large");
    // q[s][j] = sum_k A(s,k) alpha_j(s,k)
    std::vector<std::vector<BigInt>> q(s_max + 1);
    for (int s = 1; s <= s_max; ++s) {
        q[s].assign(s + 1, BigInt(0));
        for (int k = 0; k < s; ++k) {
            const auto alpha = alpha_coefficients(s, k);
            for (int j = 0; j <= s; ++j) q[s][j] += table.at(s, k) * alpha.coeffs[j];
        }
    }
    return fourier_side(h, f, s_max, [&](int s, int n) {
        BigInt p = 0, npow = 1;
        for (int j = 0; j <= s; ++j) {
            p += q[s][j] * npow;
            npow *= n;
        }
        const BigInt sf = factorial(s);
        return static_cast<double>(BigRational(p, sf * sf));
    });
}

namespace {

BigInt falling_int(int k, int q) {
    BigInt r = 1;
    for (int i = 0; i < q; ++i) r *= (k - i);
    return r;
}

}  // namespace

Complex spectral_average_jet(const HermitianMatrix& h, const Jet& jet, int s_max) {
    using C = WideComplex<Wider>;
    const auto& table = eulerian_table();
    if (s_max < 0 || s_max > table.max_order()) throw ArgumentError("spectral_average_jet: s_max out of range");
    if (jet.size() < static_cast<std::size_t>(s_max) + 1) throw ArgumentError("spectral_average_jet: jet too short");
    const auto traces = trace_powers_ld(h, s_max);
    KahanSum<ComplexLD> acc;
    acc += ComplexLD(static_cast<long double>(jet[0].re), static_cast<long double>(jet[0].im));
    for (int s = 1; s <= s_max; ++s) {
        C deriv;
        for (int r = 0; r <= s; ++r) {
            BigInt a_deriv = 0;  // A_s^{(s-r)}(1)
            for (int k = s - r; k < s; ++k) a_deriv += table.at(s, k) * falling_int(k, s - r);
            if (a_deriv == 0) continue;
            deriv += jet[r] * Wider(binomial(s, r) * a_deriv);
        }
        const Wider sf = Wider(factorial(s));
        const C scaled = deriv * (Wider(1) / (sf * sf));
        const ComplexLD d(static_cast<long double>(scaled.re), static_cast<long double>(scaled.im));
        const Complex ph = i_pow(s);
        acc += ComplexLD(ph.real(), ph.imag()) * traces[s] / static_cast<long double>(h.n()) * d;
    }
    const ComplexLD v = acc.value();
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

Jet heat_kernel_jet(double beta, int r_max) {
    using C = WideComplex<Wider>;
    Jet out(r_max + 1);
    out[0] = C(Wider(1), Wider(0));
    for (int r = 1; r <= r_max; ++r) out[r] = out[r - 1] * C(Wider(-(r - 1)), Wider(beta));
    return out;
}

Jet monomial_jet(int m, int r_max) {
    using C = WideComplex<Wider>;
    if (m < 0) throw ArgumentError("monomial_jet: m must be >= 0");
    // signed Stirling numbers of the first kind s(r, m) by rows
    std::vector<BigInt> row{BigInt(1)};
    Jet out(r_max + 1);
    const Complex ph = i_pow(-m);
    const Wider mf = Wider(factorial(m));
    for (int r = 0; r <= r_max; ++r) {
        if (r > 0) {
            std::vector<BigInt> next(r + 1, BigInt(0));
            for (int k = 1; k <= r; ++k) {
                next[k] = row[k - 1];
                if (k < r) next[k] -= (r - 1) * row[k];
            }
            row = std::move(next);
        }
        const Wider v = m <= r ? mf * Wider(row[m]) : Wider(0);
        out[r] = C(v * Wider(ph.real()), v * Wider(ph.imag()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Semicircle

double bessel_j1(double x) {
    if (x < 0) return -bessel_j1(-x);
    if (x <= 25) {
        const long double h = static_cast<long double>(x) / 2;
        const long double h2 = h * h;
        long double term = h, sum = h;
        for (int k = 0; k < 200; ++k) {
            term *= -h2 / ((k + 1.0L) * (k + 2.0L));
            sum += term;
            if (k > h && std::abs(term) < 1e-22L) break;
        }
        return static_cast<double>(sum);
    }
    const long double mu = 4;
    long double p = 0, q = 0, a = 1, prev = std::numeric_limits<long double>::infinity();
    for (int k = 0; k < 200; ++k) {
        const long double t = a / std::pow(static_cast<long double>(x), k);
        if (std::abs(t) > prev) break;
        prev = std::abs(t);
        switch (k % 4) {
            case 0: p += t; break;
            case 1: q += t; break;
            case 2: p -= t; break;
            default: q -= t; break;
        }
        if (std::abs(t) < 1e-22L) break;
        const long double odd = 2.0L * k + 1;
        a *= (mu - odd * odd) / (8.0L * (k + 1));
    }
    const long double chi = static_cast<long double>(x) - 0.75L * boost::math::constants::pi<long double>();
    const long double amp = std::sqrt(2.0L / (boost::math::constants::pi<long double>() * x));
    return static_cast<double>(amp * (p * std::cos(chi) - q * std::sin(chi)));
}

double semicircle_counting(double lambda, int n_max) {
    if (std::abs(lambda) > kPi * (1 + 1e-12)) throw DomainError("semicircle_counting: |lambda| must be <= pi");
    KahanSum<double> acc;
    for (int n = 1; n <= n_max; ++n) {
        acc += bessel_j1(n * kPi) * std::sin(n * lambda) / (static_cast<double>(n) * n);
    }
    return 0.5 + lambda / (2 * kPi) + 2 / (kPi * kPi) * acc.value();
}

double semicircle_exact(double lambda) {
    if (std::abs(lambda) > kPi * (1 + 1e-12)) throw DomainError("semicircle_exact: |lambda| must be <= pi");
    const double x = std::clamp(lambda / kPi, -1.0, 1.0);
    return 0.5 + (x * std::sqrt(1 - x * x) + std::asin(x)) / kPi;
}

double catalan_trace(int p) {
    if (p < 0) throw ArgumentError("catalan_trace: p must be >= 0");
    const BigInt c = binomial(2 * p, p) / (p + 1);
    return static_cast<double>(c) * std::pow(kPi / 2, 2 * p);
}

std::vector<Wide> catalan_traces(int s_max) {
    const Wide half_pi = boost::math::constants::pi<Wide>() / 2;
    std::vector<Wide> out(s_max + 1, Wide(0));
    for (int s = 0; s <= s_max; s += 2) {
        const int p = s / 2;
        out[s] = Wide(binomial(2 * p, p) / (p + 1)) * pow(half_pi, s);
    }
    return out;
}

double semicircle_resummed_coefficient(int n, int s_max) {
    if (n < 1) throw ArgumentError("semicircle_resummed_coefficient: n must be >= 1");
    const auto traces = catalan_traces(s_max);
    const auto c = doublesum_coefficients(traces, n, Mode::Counting, kPi);
    return c.a[n - 1].real() / kPi;
}

}  // namespace hermtrace
