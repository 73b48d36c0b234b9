#include "hermtrace/identities.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "hermtrace/errors.hpp"
#include "hermtrace/scattering.hpp"
#include "hermtrace/walks.hpp"

namespace hermtrace {

namespace {

class Recorder {
public:
    Recorder(std::string name, double tolerance) {
        check_.name = std::move(name);
        check_.tolerance = tolerance;
    }

    // Records a residual; fails when it exceeds the tolerance.
    void residual(double r, const std::string& label) {
        ++check_.cases;
        if (!(r <= check_.worst)) check_.worst = std::isnan(r) ? INFINITY : std::max(check_.worst, r);
        if (!(r <= check_.tolerance)) fail(label);
    }

    // Records an exact comparison.
    void exact(bool ok, const std::string& label) {
        ++check_.cases;
        if (!ok) {
            check_.worst = 1;
            fail(label);
        }
    }

    IdentityCheck done() { return std::move(check_); }

private:
    void fail(const std::string& label) {
        if (check_.passed) check_.first_failure = label;
        check_.passed = false;
    }
    IdentityCheck check_;
};

std::string sk(int s, int k) { return "(s,k)=(" + std::to_string(s) + "," + std::to_string(k) + ")"; }

Complex polylog_with(const EulerianTable& table, int s, Complex z) {
    const auto& row = table.row(s);
    Complex acc(0, 0);
    for (auto it = row.rbegin(); it != row.rend(); ++it) acc = acc * z + *it;
    return z * acc / std::pow(1.0 - z, s + 1);
}

// Returns the partial sum and the sum of term magnitudes.
std::pair<Complex, double> polylog_series(int s, Complex z, int terms) {
    Complex acc(0, 0), zn = z;
    double scale = 0;
    for (int n = 1; n <= terms; ++n) {
        const Complex term = std::pow(static_cast<double>(n), s) * zn;
        acc += term;
        scale += std::abs(term);
        zn *= z;
    }
    return {acc, scale};
}

}  // namespace

bool IdentityReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

std::string IdentityReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["passed"] = passed();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["passed"] = c.passed;
        j["cases"] = c.cases;
        j["worst"] = c.worst;
        j["tolerance"] = c.tolerance;
        if (!c.passed) j["first_failure"] = c.first_failure;
        arr.push_back(std::move(j));
    }
    doc["checks"] = std::move(arr);
    return doc.dump(2);
}

IdentityReport run_identities(const IdentityOptions& opt, const EulerianTable& table) {
    if (opt.s_max < 1 || opt.s_max > std::min(table.max_order(), 24)) {
        throw ArgumentError("identities: s_max must lie in 1..24");
    }
    if (opt.trials < 0) throw ArgumentError("identities: trials must be >= 0");
    const int s_max = opt.s_max;
    const int s_small = std::min(s_max, 10);
    const int s_delta = std::min(s_max, 8);
    IdentityReport report;

    {
        Recorder r("eulerian_closed_form", 0);
        for (int s = 1; s <= s_max; ++s)
            for (int k = 0; k <= s; ++k) r.exact(table.at(s, k) == eulerian_number(s, k), sk(s, k));
        report.checks.push_back(r.done());
    }
    {
        Recorder r("eulerian_row_sums", 0);
        for (int s = 1; s <= s_max; ++s) {
            BigInt sum = 0;
            for (int k = 0; k < s; ++k) sum += table.at(s, k);
            r.exact(sum == factorial(s), "s=" + std::to_string(s));
        }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("eulerian_symmetry", 0);
        for (int s = 1; s <= s_max; ++s) {
            r.exact(table.at(s, s) == 0, sk(s, s));
            for (int k = 0; k < s; ++k) r.exact(table.at(s, k) == table.at(s, s - 1 - k), sk(s, k));
        }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("worpitzky", 1e-9);
        const std::vector<Complex> samples{{3, 0}, {-2, 0}, {0.5, 1.5}, {-1.2, -0.7}, {2.2, 1.9}};
        for (int s = 1; s <= s_max; ++s) {
            r.residual(verify_worpitzky(s, samples, table), "s=" + std::to_string(s));
        }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("worpitzky_corollaries", 0);
        for (int s = 2; s <= s_small; ++s) {
            for (int rr = 1; rr < s; ++rr) {
                BigInt upper = 0, lower = 0;
                for (int k = s - rr; k <= s - 1; ++k) upper += table.at(s, k) * binomial(k + rr, s);
                for (int k = 0; k <= rr - 1; ++k) lower += table.at(s, k) * binomial(rr + s - k - 1, s);
                BigInt target = 1;
                for (int i = 0; i < s; ++i) target *= rr;
                const std::string label = "s=" + std::to_string(s) + " r=" + std::to_string(rr);
                r.exact(upper == target, label);
                r.exact(lower == target, label + " (mirror)");
            }
        }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("alpha_orthogonality", 0);
        for (int s = 1; s <= s_small; ++s) {
            std::vector<BigInt> q(s + 1, BigInt(0));
            for (int k = 0; k < s; ++k) {
                const auto alpha = alpha_coefficients(s, k);
                for (int j = 0; j <= s; ++j) q[j] += table.at(s, k) * alpha.coeffs[j];
            }
            for (int j = 0; j <= s; ++j) {
                r.exact(q[j] == (j == s ? factorial(s) : BigInt(0)), "s=" + std::to_string(s) + " j=" + std::to_string(j));
            }
        }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("alpha_newton_determinant", 0);
        for (int s = 1; s <= s_small; ++s)
            for (int k = 0; k < s; ++k) r.exact(alpha_coefficients(s, k).coeffs == alpha_coefficients_newton(s, k), sk(s, k));
        report.checks.push_back(r.done());
    }
    {
        Recorder r("alpha_corollaries", 0);
        for (int s = 2; s <= s_small; ++s) {
            BigInt j1 = 0, js = 0;
            for (int k = 0; k < s; ++k) {
                const BigInt term = table.at(s, k) * factorial(k) * factorial(s - 1 - k);
                if ((s - 1 - k) % 2 == 0) j1 += term;
                else j1 -= term;
                js += table.at(s, k) * ((k + 1) * s - s * (s + 1) / 2);
            }
            r.exact(j1 == 0, "j=1 s=" + std::to_string(s));
            r.exact(js == 0, "j=s-1 s=" + std::to_string(s));
        }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("delta_identity", 1e-9);
        for (int s = 1; s <= s_delta; ++s)
            for (int m = 1; m <= s_delta; ++m)
                r.residual(verify_delta_identity(s, m, table), "s=" + std::to_string(s) + " m=" + std::to_string(m));
        report.checks.push_back(r.done());
    }
    {
        Recorder r("b_coefficient_routes", 1e-9);
        for (int s = 1; s <= s_delta; ++s)
            for (int k = 0; k < s; ++k)
                for (int m = 0; m <= s; ++m) {
                    const double a = b_coefficient(m, s, k);
                    const double b = static_cast<double>(b_coefficient_alpha(m, s, k));
                    r.residual(std::abs(a - b) / std::max(1.0, std::abs(b)),
                               "m=" + std::to_string(m) + " " + sk(s, k));
                }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("stirling_recurrence", 0);
        std::vector<BigInt> row{BigInt(1)};  // S(n, k), k = 0..n
        for (int n = 1; n <= s_max; ++n) {
            std::vector<BigInt> next(n + 1, BigInt(0));
            for (int k = 1; k <= n; ++k) next[k] = (k < n ? k * row[k] : BigInt(0)) + row[k - 1];
            row = std::move(next);
            for (int k = 1; k <= n; ++k) r.exact(row[k] == stirling_second(n, k), "(n,k)=(" + std::to_string(n) + "," + std::to_string(k) + ")");
        }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("polylog_rational_vs_series", 1e-10);
        const std::vector<Complex> samples{{0.5, 0}, {-0.3, 0.4}, {0.1, -0.6}, {0.7, 0}, {0, 0.7}};
        for (int s = 1; s <= s_max; ++s)
            for (const Complex z : samples) {
                const auto [series, scale] = polylog_series(s, z, 2000);
                r.residual(std::abs(polylog_with(table, s, z) - series) / scale, "s=" + std::to_string(s));
            }
        report.checks.push_back(r.done());
    }

    CounterRng rng(opt.seed);
    {
        Recorder r("worpitzky_random", 1e-9);
        for (int t = 0; t < opt.trials; ++t) {
            const double rad = 3 * std::sqrt(rng.next_uniform()), ang = 2 * kPi * rng.next_uniform();
            const Complex z = std::polar(rad, ang);
            for (int s = 1; s <= s_max; ++s) r.residual(verify_worpitzky(s, std::span<const Complex>(&z, 1), table), "s=" + std::to_string(s));
        }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("polylog_derivative_recursion", 1e-6);
        const double h = 1e-5;
        for (int t = 0; t < opt.trials; ++t) {
            const Complex z = std::polar(0.5 * std::sqrt(rng.next_uniform()), 2 * kPi * rng.next_uniform());
            for (int s = 2; s <= std::min(s_max, 8); ++s) {
                const Complex deriv = (polylog_with(table, s - 1, z + h) - polylog_with(table, s - 1, z - h)) / (2 * h);
                const Complex lhs = polylog_with(table, s, z);
                r.residual(std::abs(lhs - z * deriv) / std::max(1e-3, std::abs(lhs)), "s=" + std::to_string(s));
            }
        }
        report.checks.push_back(r.done());
    }
    {
        Recorder r("factorization", 1e-9);
        for (int t = 0; t < opt.trials; ++t) {
            const int n = 2 + static_cast<int>(rng.next_uniform() * 5);
            CMatrix m(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    const double re = 2 * rng.next_uniform() - 1;
                    const double im = i == j ? 0.0 : 2 * rng.next_uniform() - 1;
                    m(i, j) = Complex(re, im);
                    m(j, i) = std::conj(m(i, j));
                }
            const ScatteringSystem sys(HermitianMatrix::from_dense(m));
            for (int k = 0; k < 5; ++k) {
                const Complex lambda(4 * rng.next_uniform() - 2, 2 * rng.next_uniform() - 1);
                r.residual(sys.factorization_residual(lambda), "trial " + std::to_string(t));
            }
        }
        report.checks.push_back(r.done());
    }
    return report;
}

}  // namespace hermtrace
