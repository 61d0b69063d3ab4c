#ifndef QBT_INTRUSIVE_HPP
#define QBT_INTRUSIVE_HPP

#include "qbt/loewner.hpp"

namespace qbt {

/// Dense square-root factors of the variant's Gramian pair,
/// P_X = U_X U_X^T and Q_Y = L_Y L_Y^T; the singular values of L_Y^T U_X
/// are the (generalized) Hankel singular values.
struct GramianPair {
    Matrix U_X;
    Matrix L_Y;
    Variant variant = Variant::lyapunov;
    GramianSolution P_X;
    GramianSolution Q_Y;
};

// Pairs per variant: lyapunov (P, Q); bst (P, Q_W); prbt (P_N, Q_M);
// brbt (P_K, Q_J). Factors through the symmetric eigendecomposition.
GramianPair gramian_pair(const StateSpaceSystem& sys, Variant variant);

// Hankel singular values sigma(L_Y^T U_X), descending.
Eigen::VectorXd hankel_singular_values(const GramianPair& pair);

/// Intrusive square-root balanced truncation: SVD of L_Y^T U_X, projection
/// bases W_r = L_Y Z_1 Sigma_1^{-1/2}, V_r = U_X Y_1 Sigma_1^{-1/2}
/// (biorthogonal by construction), reduced model by Petrov-Galerkin
/// projection with D_r = D.
ReducedModel sqrt_bt(const StateSpaceSystem& sys, Variant variant, Eigen::Index r);
ReducedModel sqrt_bt(const StateSpaceSystem& sys, const GramianPair& pair, Eigen::Index r);

}  // namespace qbt

#endif  // QBT_INTRUSIVE_HPP
