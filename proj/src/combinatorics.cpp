#include "hermtrace/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hermtrace/errors.hpp"

namespace hermtrace {

namespace {

constexpr double kPolylogPoleGuard = 1e-12;
constexpr double kPolylogDiscSlack = 1e-9;
constexpr int kCompositionCap = 24;

void check_polylog_argument(Complex z) {
    if (std::abs(1.0 - z) < kPolylogPoleGuard) {
        throw SingularityError("polylog: argument within 1e-12 of the pole z = 1");
    }
    if (std::abs(z) > 1.0 + kPolylogDiscSlack) {
        throw DomainError("polylog: |z| must not exceed 1");
    }
}

BigInt ipow(const BigInt& base, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// Determinant of an integer matrix by Bareiss elimination with row pivoting.
BigInt bareiss_det(std::vector<std::vector<BigInt>> a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

// sum over compositions of l into m positive parts of prod 1/j_i
BigRational composition_reciprocal_sum(int m, int l,
                                       std::vector<std::vector<BigRational>>& memo,
                                       std::vector<std::vector<bool>>& known) {
    if (m == 0) return l == 0 ? BigRational(1) : BigRational(0);
    if (l < m) return 0;
    if (known[m][l]) return memo[m][l];
    BigRational acc = 0;
    for (int j = 1; j <= l - m + 1; ++j) {
        acc += composition_reciprocal_sum(m - 1, l - j, memo, known) / BigRational(j);
    }
    known[m][l] = true;
    memo[m][l] = acc;
    return acc;
}

}  // namespace

BigInt factorial(int n) {
    if (n < 0) throw ArgumentError("factorial: negative argument");
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

// ---------------------------------------------------------------------------
// EulerianTable

EulerianTable::EulerianTable(int max_order) {
    if (max_order < 0) throw ArgumentError("EulerianTable: negative order");
    rows_.resize(static_cast<std::size_t>(max_order) + 1);
    rows_[0] = {BigInt(1)};
    for (int s = 1; s <= max_order; ++s) {
        auto& row = rows_[s];
        const auto& prev = rows_[s - 1];
        row.assign(static_cast<std::size_t>(s) + 1, BigInt(0));
        for (int k = 0; k < s; ++k) {
            BigInt v = 0;
            if (k < static_cast<int>(prev.size())) v += (k + 1) * prev[k];
            if (k >= 1) v += (s - k) * prev[k - 1];
            row[k] = v;
        }
    }
    refresh_doubles();
}

void EulerianTable::refresh_doubles() {
    rows_f_.resize(rows_.size());
    rows_norm_.resize(rows_.size());
    for (std::size_t s = 0; s < rows_.size(); ++s) {
        const BigInt fact = factorial(static_cast<int>(s));
        rows_f_[s].resize(rows_[s].size());
        rows_norm_[s].resize(rows_[s].size());
        for (std::size_t k = 0; k < rows_[s].size(); ++k) {
            rows_f_[s][k] = rows_[s][k].convert_to<double>();
            rows_norm_[s][k] = BigRational(rows_[s][k], fact).convert_to<double>();
        }
    }
}

const BigInt& EulerianTable::at(int s, int k) const {
    if (s < 0 || s > max_order() || k < 0 || k > s) {
        throw ArgumentError("EulerianTable: index (" + std::to_string(s) + "," + std::to_string(k) +
                            ") out of range");
    }
    return rows_[s][k];
}

const std::vector<double>& EulerianTable::row(int s) const {
    if (s < 0 || s > max_order()) throw ArgumentError("EulerianTable: order out of range");
    return rows_f_[s];
}

const std::vector<double>& EulerianTable::normalized_row(int s) const {
    if (s < 0 || s > max_order()) throw ArgumentError("EulerianTable: order out of range");
    return rows_norm_[s];
}

EulerianTable EulerianTable::with_perturbed(int s, int k, const BigInt& delta) const {
    (void)at(s, k);
    EulerianTable copy;
    copy.rows_ = rows_;
    copy.rows_[s][k] += delta;
    copy.refresh_doubles();
    return copy;
}

const EulerianTable& eulerian_table() {
    static const EulerianTable table(kDefaultEulerianOrder);
    return table;
}

// ---------------------------------------------------------------------------

BigInt eulerian_number(int s, int k) {
    if (s < 1) throw ArgumentError("eulerian_number: s must be >= 1");
    if (k < 0 || k > s) throw ArgumentError("eulerian_number: k must lie in 0..s");
    BigInt acc = 0;
    for (int m = 0; m <= k; ++m) {
        BigInt term = binomial(s + 1, m) * ipow(BigInt(k + 1 - m), s);
        if (m % 2 == 0) acc += term;
        else acc -= term;
    }
    return acc;
}

namespace {

template <typename C>
C horner(const std::vector<double>& coeffs, C z) {
    using R = typename C::value_type;
    C acc{0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + C(static_cast<R>(*it));
    return acc;
}

}  // namespace

Complex eulerian_poly(int s, Complex z) {
    if (s < 0) throw ArgumentError("eulerian_poly: negative order");
    return horner(eulerian_table().row(s), z);
}

ComplexLD eulerian_poly(int s, ComplexLD z) {
    if (s < 0) throw ArgumentError("eulerian_poly: negative order");
    return horner(eulerian_table().row(s), z);
}

Complex eulerian_poly_normalized(int s, Complex z) {
    if (s < 0) throw ArgumentError("eulerian_poly_normalized: negative order");
    return horner(eulerian_table().normalized_row(s), z);
}

BigInt stirling_second(int n, int k) {
    if (n < 1 || k < 1 || k > n) throw ArgumentError("stirling_second: need 1 <= k <= n");
    BigInt acc = 0;
    for (int j = 0; j <= k; ++j) {
        BigInt term = binomial(k, j) * ipow(BigInt(j), n);
        if ((k - j) % 2 == 0) acc += term;
        else acc -= term;
    }
    return acc / factorial(k);
}

Complex polylog_neg(int s, Complex z) {
    if (s < 0) throw ArgumentError("polylog_neg: s must be >= 0");
    check_polylog_argument(z);
    const Complex w = 1.0 - z;
    if (s == 0) return z / w;
    return z * eulerian_poly(s, z) / std::pow(w, s + 1);
}

Complex polylog_neg_normalized(int s, Complex z) {
    if (s < 0) throw ArgumentError("polylog_neg_normalized: s must be >= 0");
    check_polylog_argument(z);
    const Complex w = 1.0 - z;
    if (s == 0) return z / w;
    return z * eulerian_poly_normalized(s, z) / std::pow(w, s + 1);
}

Complex polylog_one(Complex z) {
    check_polylog_argument(z);
    return -std::log(1.0 - z);
}

// ---------------------------------------------------------------------------

AlphaCoefficients alpha_coefficients(int s, int k) {
    if (s < 1) throw ArgumentError("alpha_coefficients: s must be >= 1");
    if (k < 0 || k > s - 1) throw ArgumentError("alpha_coefficients: k must lie in 0..s-1");
    std::vector<BigInt> poly{BigInt(1)};
    for (int l = 1; l <= s; ++l) {
        const BigInt c = k + 1 - l;
        std::vector<BigInt> next(poly.size() + 1, BigInt(0));
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] += c * poly[j];
            next[j + 1] += poly[j];
        }
        poly = std::move(next);
    }
    return {s, k, std::move(poly)};
}

std::vector<BigInt> alpha_coefficients_newton(int s, int k) {
    if (s < 1) throw ArgumentError("alpha_coefficients_newton: s must be >= 1");
    std::vector<BigInt> t(static_cast<std::size_t>(s) + 1, BigInt(0));
    for (int r = 1; r <= s; ++r) {
        for (int q = 1; q <= s; ++q) t[r] += ipow(BigInt(k + 1 - q), r);
    }
    std::vector<BigInt> alpha(static_cast<std::size_t>(s) + 1, BigInt(0));
    alpha[s] = 1;
    for (int m = 1; m <= s; ++m) {
        std::vector<std::vector<BigInt>> mat(m, std::vector<BigInt>(m, BigInt(0)));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j <= i; ++j) mat[i][j] = t[i - j + 1];
            if (i + 1 < m) mat[i][i + 1] = i + 1;
        }
        alpha[s - m] = bareiss_det(std::move(mat)) / factorial(m);
    }
    return alpha;
}

BigRational b_coefficient_exact(int m, int s, int k) {
    if (m < 0 || s < 1 || k < 0) throw ArgumentError("b_coefficient: invalid indices");
    if (s > kCompositionCap) throw ResourceError("b_coefficient: s beyond composition cap 24");
    if (m == 0) {
        // d^s z^k at z = 1 is the falling factorial.
        BigInt r = 1;
        for (int i = 0; i < s; ++i) r *= k - i;
        return r;
    }
    std::vector<std::vector<BigRational>> memo(m + 1, std::vector<BigRational>(s + 1));
    std::vector<std::vector<bool>> known(m + 1, std::vector<bool>(s + 1, false));
    BigRational acc = 0;
    for (int l = std::max(s - k, m); l <= s; ++l) {
        const BigRational c = composition_reciprocal_sum(m, l, memo, known);
        const BigRational term = BigRational(binomial(k, s - l)) * c;
        if ((l - m) % 2 == 0) acc += term;
        else acc -= term;
    }
    return acc * BigRational(factorial(s));
}

double b_coefficient(int m, int s, int k) { return b_coefficient_exact(m, s, k).convert_to<double>(); }

BigInt b_coefficient_alpha(int m, int s, int k) {
    if (m < 0 || s < 1 || k < 0 || k > s - 1) throw ArgumentError("b_coefficient_alpha: invalid indices");
    if (m > s) return 0;
    return factorial(m) * alpha_coefficients(s, k).coeffs[m];
}

double verify_worpitzky(int s, std::span<const Complex> z_samples, const EulerianTable& table) {
    if (s < 1) throw ArgumentError("verify_worpitzky: s must be >= 1");
    long double fact = 1;
    for (int i = 2; i <= s; ++i) fact *= i;
    double worst = 0;
    for (const Complex zc : z_samples) {
        const ComplexLD z(zc.real(), zc.imag());
        ComplexLD lhs = 0;
        for (int k = 0; k < s; ++k) {
            ComplexLD prod = 1;
            for (int l = 1; l <= s; ++l) prod *= z + static_cast<long double>(k + 1 - l);
            lhs += table.at(s, k).convert_to<long double>() * prod / fact;
        }
        const ComplexLD rhs = std::pow(z, s);
        worst = std::max(worst, static_cast<double>(std::abs(lhs - rhs)));
    }
    return worst;
}

double verify_delta_identity(int s, int m, const EulerianTable& table) {
    if (s < 1 || m < 1) throw ArgumentError("verify_delta_identity: s, m must be >= 1");
    BigRational acc = 0;
    for (int k = 0; k < s; ++k) acc += BigRational(table.at(s, k)) * b_coefficient_exact(m, s, k);
    const BigInt fact = factorial(s);
    acc /= BigRational(fact * fact);
    const BigRational target = (s == m) ? 1 : 0;
    return abs(acc - target).convert_to<double>();
}

}  // namespace hermtrace
