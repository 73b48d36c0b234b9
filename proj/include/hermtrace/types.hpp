#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hermtrace {

using Complex = std::complex<double>;
using ComplexLD = std::complex<long double>;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Selects the counting function or the density of states.
enum class Mode { Counting, Density };

/// Which associated graph an operation works on: with loops (I) or simple (II).
enum class GraphKind { I, II };

}  // namespace hermtrace
