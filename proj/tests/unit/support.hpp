#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hermtrace/matrix_model.hpp"

namespace testsupport {

using hermtrace::CMatrix;
using hermtrace::Complex;
using hermtrace::HermitianMatrix;

inline CMatrix random_dense(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            m(i, j) = i == j ? Complex(u(rng), 0) : Complex(u(rng), u(rng));
            m(j, i) = std::conj(m(i, j));
        }
    return m;
}

inline HermitianMatrix random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0) {
    return HermitianMatrix::from_dense(random_dense(n, rng, scale));
}

/// Eigenvalues from Eigen's self-adjoint solver, sorted.
inline std::vector<double> reference_eigenvalues(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.entries());
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + h.n());
    std::sort(out.begin(), out.end());
    return out;
}

inline int staircase(const std::vector<double>& eig, double lambda) {
    return static_cast<int>(std::count_if(eig.begin(), eig.end(), [&](double e) { return e <= lambda; }));
}

inline double min_distance(const std::vector<double>& eig, double lambda) {
    double d = INFINITY;
    for (double e : eig) d = std::min(d, std::abs(lambda - e));
    return d;
}

inline HermitianMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return HermitianMatrix::from_dense(m);
}

inline HermitianMatrix two_star(double h12, double h13, double d0 = 0, double d1 = 0, double d2 = 0) {
    CMatrix m = CMatrix::Zero(3, 3);
    m(0, 0) = d0;
    m(1, 1) = d1;
    m(2, 2) = d2;
    m(0, 1) = m(1, 0) = h12;
    m(0, 2) = m(2, 0) = h13;
    return HermitianMatrix::from_dense(m);
}

}  // namespace testsupport
