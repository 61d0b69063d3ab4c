#ifndef QBT_SCHUR_HPP
#define QBT_SCHUR_HPP

#include <vector>

#include <Eigen/Core>

namespace qbt {
namespace schur {

// Internal dense kernels shared by the matrix-equation solvers and the
// spectral splitting: real Schur reordering by orthogonal block swaps and
// quasi-triangular Sylvester back-substitution.

struct Block {
    Eigen::Index start;
    Eigen::Index size;     // 1 or 2
    double real_part;      // eigenvalue real part (trace/2 for 2x2 blocks)
};

// Diagonal block partition of a real quasi-upper-triangular T.
std::vector<Block> diagonal_blocks(const Eigen::MatrixXd& T);

// Reorders T = U^T A U in place so that all eigenvalues with negative real
// part come first, using direct adjacent-block swaps. Returns the number of
// stable (Re < 0) states. U accumulates the orthogonal transformations.
Eigen::Index order_stable_first(Eigen::MatrixXd& T, Eigen::MatrixXd& U);

// Solves T1^T X + X T1 = C for T1 quasi-upper-triangular (the transformed
// Lyapunov equation of Bartels-Stewart). `pivot_floor` guards the small
// block solves. C is overwritten with X.
void solve_lyap_quasi_triangular(const Eigen::MatrixXd& T1, Eigen::MatrixXd& C,
                                 double pivot_floor);

// Solves T11 X - X T22 = C with both factors quasi-upper-triangular (the
// decoupling equation of the stable/antistable split).
Eigen::MatrixXd solve_sylvester_quasi_triangular(const Eigen::MatrixXd& T11,
                                                 const Eigen::MatrixXd& T22,
                                                 const Eigen::MatrixXd& C, double pivot_floor);

}  // namespace schur
}  // namespace qbt

#endif  // QBT_SCHUR_HPP
