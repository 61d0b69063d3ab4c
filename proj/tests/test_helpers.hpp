#ifndef QBT_TEST_HELPERS_HPP
#define QBT_TEST_HELPERS_HPP

#include <random>

#include "qbt/lti.hpp"

namespace qbt_test {

using qbt::Complex;
using qbt::Matrix;

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> dist;
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = dist(rng);
    return M;
}

// Random stable system with spectral abscissa at most -margin.
inline qbt::StateSpaceSystem random_stable_system(std::mt19937_64& rng, Eigen::Index n,
                                                  Eigen::Index m, Eigen::Index p,
                                                  double margin = 0.5) {
    Matrix A = random_matrix(rng, n, n) / std::sqrt(static_cast<double>(n));
    const double abscissa =
        Eigen::EigenSolver<Matrix>(A, false).eigenvalues().real().maxCoeff();
    A.diagonal().array() -= abscissa + margin;
    return {A, random_matrix(rng, n, m), random_matrix(rng, p, n), Matrix::Zero(p, m)};
}

inline qbt::StateSpaceSystem scalar_system(double a, double b, double c, double d) {
    Matrix A(1, 1), B(1, 1), C(1, 1), D(1, 1);
    A << a;
    B << b;
    C << c;
    D << d;
    return {A, B, C, D};
}

// S1 = (s + 2) / (s + 1): square, minimum phase, strictly positive real.
inline qbt::StateSpaceSystem s1() { return scalar_system(-1.0, 1.0, 1.0, 1.0); }

// S2 = 0.5 / (s + 1): strictly bounded real.
inline qbt::StateSpaceSystem s2() { return scalar_system(-1.0, 1.0, 0.5, 0.0); }

inline double max_abs(const qbt::CMatrix& M) {
    return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

inline double rel_dev(const qbt::CMatrix& got, const qbt::CMatrix& want) {
    const double scale = std::max(max_abs(want), 1e-300);
    return max_abs(got - want) / scale;
}

}  // namespace qbt_test

#endif  // QBT_TEST_HELPERS_HPP
