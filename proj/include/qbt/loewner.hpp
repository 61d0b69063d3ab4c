#ifndef QBT_LOEWNER_HPP
#define QBT_LOEWNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "qbt/quadrature.hpp"

namespace qbt {

/// The data-driven surrogate for (L_Y^T U_X, L_Y^T A U_X, L_Y^T B, C U_X):
/// divided-difference Loewner matrices assembled from frequency samples.
/// Block (k, j) of L is
///   -phi_k rho_j [G_sigmaA(i w_k) - G_sigmaA(i z_j)] / (i w_k - i z_j),
/// never touching a resolvent.
struct LoewnerQuadruple {
    CMatrix L;  // (p_y K) x (m_x J)
    CMatrix M;  // same shape
    CMatrix H;  // (p_y K) x m
    CMatrix G;  // p x (m_x J)
    Eigen::Index p_y = 0, m_x = 0, K = 0, J = 0;
    Eigen::Index p = 0, m = 0;
};

struct Provenance {
    enum class Type { intrusive, quadrature };
    Type type = Type::intrusive;
    int N_left = 0;
    int N_right = 0;

    std::string str() const;
};

/// Reduced-order model with the retained singular values (the full computed
/// list, not just the leading r) and the balancing variant that produced it.
struct ReducedModel {
    Matrix Ar, Br, Cr, Dr;
    std::vector<double> singular_values;
    Variant variant = Variant::lyapunov;
    Provenance provenance;

    Eigen::Index order() const { return Ar.rows(); }
    StateSpaceSystem to_system() const { return {Ar, Br, Cr, Dr}; }
};

LoewnerQuadruple assemble_loewner(const FrequencyDataset& data);

// Block-unitary transformation onto a real quadruple for conjugate-closed
// rules: each +/- node pair maps through (1/sqrt 2) [[1, 1], [i, -i]] (x)
// identity, zero nodes by identity. Singular values of L are preserved.
// Residual imaginary parts above 1e-9 of the norm abort with
// ResidualImaginary; otherwise they are dropped exactly.
LoewnerQuadruple realify(const LoewnerQuadruple& q, const FrequencyDataset& data);

// SVD truncation of the quadruple (the data-driven square-root algorithm).
// The feedthrough is caller-supplied (all sampled quantities are strictly
// proper); defaults to zero.
ReducedModel reduce(const LoewnerQuadruple& q, Eigen::Index r,
                    const std::optional<Matrix>& feedthrough = std::nullopt);

// sample -> assemble -> realify (when conjugate-closed) -> reduce.
ReducedModel genquadbt_pipeline(const OracleTriple& oracles, const QuadratureRule& left,
                                const QuadratureRule& right, Eigen::Index r,
                                const std::optional<Matrix>& feedthrough = std::nullopt);

}  // namespace qbt

#endif  // QBT_LOEWNER_HPP
