#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "hermtrace/types.hpp"

namespace hermtrace {

/// Uniform grid lo..hi with `steps` points, both ends included.
struct Grid {
    double lo = -3;
    double hi = 3;
    int steps = 121;

    [[nodiscard]] std::vector<double> points() const;
};

/// Parses "lo:hi:steps"; ArgumentError on malformed or empty grids.
Grid parse_grid(const std::string& text);

/// Formats with 12 significant digits in the C locale.
std::string csv_number(double x);

struct Figure1Data {
    static constexpr std::array<int, 5> n_values{2, 3, 4, 5, 10};
    std::vector<double> eigenvalues;
    std::vector<double> lambdas;
    std::vector<double> exact;
    std::array<std::vector<double>, 5> curves;  // total count per n_max

    /// Largest |curve - exact| over grid points farther than `margin` from every eigenvalue.
    [[nodiscard]] double max_deviation(int curve, double margin) const;
};

/// diag(-1.6, -1.4, 0.1, 2.8) with epsilon = 1/n_max, s_max = 9 n_max on
/// `steps` midpoints of (-pi, pi).
Figure1Data figure1_data(int steps = 600, int threads = 1);
std::string figure1_csv(const Figure1Data& data);

struct SemicircleRow {
    double lambda = 0;
    double fourier_bessel = 0;
    double closed_form = 0;
    double abs_error = 0;
};

/// steps + 1 points lambda_k = pi (2k - steps) / steps, k = 0..steps.
std::vector<SemicircleRow> semicircle_rows(int n_max, int steps);
std::string semicircle_csv(const std::vector<SemicircleRow>& rows);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumeric = 3;

/// Runs the command line (arguments without the program name). Data goes
/// to `out` unless -o names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hermtrace
