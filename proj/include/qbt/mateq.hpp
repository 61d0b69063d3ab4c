#ifndef QBT_MATEQ_HPP
#define QBT_MATEQ_HPP

#include <string>
#include <utility>

#include "qbt/lti.hpp"

namespace qbt {

enum class GramianKind { lyapunov_P, lyapunov_Q, bst_QW, pr_QM, pr_PN, br_QJ, br_PK };

std::string to_string(GramianKind kind);

/// A symmetric positive (semi)definite solution of a Lyapunov or Riccati
/// equation together with its residual and the closed-loop spectral
/// abscissa used for branch selection (negative for the minimal/stabilizing
/// Riccati branches; the abscissa of A itself for Lyapunov solutions).
struct GramianSolution {
    Matrix X;
    double residual_norm = 0.0;
    double closed_loop_abscissa = 0.0;
    GramianKind kind = GramianKind::lyapunov_P;

    // Dense square-root factor X = F F^T through the symmetric
    // eigendecomposition; negative eigenvalues at roundoff scale clip to 0.
    Matrix sqrt_factor() const;
};

// Solves A^T X + X A + RHS = 0 (observability orientation) for stable A by
// Bartels-Stewart. The reachability orientation is obtained by passing A^T.
GramianSolution solve_lyapunov(const Matrix& A, const Matrix& RHS,
                               GramianKind kind = GramianKind::lyapunov_Q);

// Same with RHS supplied as a tall factor F, RHS = F F^T.
GramianSolution solve_lyapunov_factored(const Matrix& A, const Matrix& F,
                                        GramianKind kind = GramianKind::lyapunov_Q);

/// Generic engine behind the variant AREs, solving
///   A^T X + X A + Q_const + (X Bhat + Shat) R^{-1} (X Bhat + Shat)^T = 0
/// for SPD R via the ordered Schur form of the 2n x 2n Hamiltonian,
/// selecting the stable invariant subspace. The returned branch makes the
/// closed-loop matrix A + Bhat R^{-1} (Shat^T + Bhat^T X) stable, which for
/// the factorization AREs used here is exactly the minimal solution.
GramianSolution solve_are_stabilizing(const Matrix& A, const Matrix& Bhat, const Matrix& Shat,
                                      const Matrix& R, const Matrix& Q_const, GramianKind kind);

// Balanced stochastic truncation ARE; P is the reachability Gramian of sys.
// Returns the minimal solution Q_W (spectral factor W minimum phase).
GramianSolution solve_bst_are(const StateSpaceSystem& sys, const Matrix& P);

// Positive-real AREs; returns (Q_M, P_N), both minimal.
std::pair<GramianSolution, GramianSolution> solve_pr_ares(const StateSpaceSystem& sys);

// Bounded-real AREs for ||G||_inf < 1; returns (Q_J, P_K), both minimal.
std::pair<GramianSolution, GramianSolution> solve_br_ares(const StateSpaceSystem& sys);

}  // namespace qbt

#endif  // QBT_MATEQ_HPP
