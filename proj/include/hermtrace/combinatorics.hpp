#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hermtrace/types.hpp"

namespace hermtrace {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

BigInt factorial(int n);
BigInt binomial(int n, int k);

/// Triangular table of Eulerian numbers A(s,k), 0 <= k <= s <= max_order.
///
/// Rows are filled once with the descent recurrence
/// A(s,k) = (k+1) A(s-1,k) + (s-k) A(s-1,k-1), A(0,0) = 1, and never mutated
/// afterwards, so a table can be shared freely between threads.
class EulerianTable {
public:
    explicit EulerianTable(int max_order);

    [[nodiscard]] int max_order() const { return static_cast<int>(rows_.size()) - 1; }

    /// A(s,k); zero for k >= s when s >= 1.
    [[nodiscard]] const BigInt& at(int s, int k) const;

    /// Row s as doubles (overflows to inf beyond s = 170).
    [[nodiscard]] const std::vector<double>& row(int s) const;

    /// Row s divided by s!, always representable: entries lie in [0, 1].
    [[nodiscard]] const std::vector<double>& normalized_row(int s) const;

    /// Copy with A(s,k) shifted by delta. Used to check that the identity
    /// suite detects a corrupted entry.
    [[nodiscard]] EulerianTable with_perturbed(int s, int k, const BigInt& delta) const;

private:
    EulerianTable() = default;
    void refresh_doubles();

    std::vector<std::vector<BigInt>> rows_;
    std::vector<std::vector<double>> rows_f_;
    std::vector<std::vector<double>> rows_norm_;
};

/// Process-wide table of order kDefaultEulerianOrder, built on first use.
inline constexpr int kDefaultEulerianOrder = 200;
const EulerianTable& eulerian_table();

/// A(s,k) from the alternating binomial sum; s >= 1, 0 <= k <= s.
BigInt eulerian_number(int s, int k);

/// Eulerian polynomial A_s(z) = sum_k A(s,k) z^k. A_0 == 1.
Complex eulerian_poly(int s, Complex z);
ComplexLD eulerian_poly(int s, ComplexLD z);

/// A_s(z) / s!, finite for every order in the default table.
Complex eulerian_poly_normalized(int s, Complex z);

/// Stirling number of the second kind, 1 <= k <= n.
BigInt stirling_second(int n, int k);

/// Li_{-s}(z) = sum_{n>=1} n^s z^n through the rational Eulerian form.
///
/// Accepts |z| <= 1 + 1e-9 and rejects |1 - z| < 1e-12 with a
/// SingularityError; outside the closed disc a DomainError is thrown.
Complex polylog_neg(int s, Complex z);

/// Li_{-s}(z) / s!, same domain as polylog_neg, without factorial overflow.
Complex polylog_neg_normalized(int s, Complex z);

/// Li_1(z) = -log(1 - z).
Complex polylog_one(Complex z);

/// Coefficients of prod_{l=1}^{s} (z + k + 1 - l), lowest degree first.
struct AlphaCoefficients {
    int s = 0;
    int k = 0;
    std::vector<BigInt> coeffs;
};

AlphaCoefficients alpha_coefficients(int s, int k);

/// Same coefficients rebuilt from power sums t_r = sum_q (k+1-q)^r via the
/// Newton-identity determinant (fraction-free Bareiss elimination).
std::vector<BigInt> alpha_coefficients_newton(int s, int k);

/// B^(m)(s,k) = d^s/dz^s [ z^k (log z)^m ] at z = 1, exactly, from the
/// composition sum over l = max(s-k, m) .. s.
BigRational b_coefficient_exact(int m, int s, int k);
double b_coefficient(int m, int s, int k);

/// The same quantity through the generating-function route m! * alpha_m(s,k).
BigInt b_coefficient_alpha(int m, int s, int k);

/// max |sum_k A(s,k) binom(z+k, s) - z^s| over the samples.
double verify_worpitzky(int s, std::span<const Complex> z_samples,
                        const EulerianTable& table = eulerian_table());

/// |(1/(s!)^2) sum_k A(s,k) B^(m)(s,k) - delta_{s,m}|.
double verify_delta_identity(int s, int m, const EulerianTable& table = eulerian_table());

}  // namespace hermtrace
