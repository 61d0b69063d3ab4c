#ifndef QBT_QUADRATURE_HPP
#define QBT_QUADRATURE_HPP

#include <utility>
#include <vector>

#include "qbt/spectral.hpp"

namespace qbt {

/// Imaginary-axis quadrature rule: real frequencies (the point used is iw)
/// with positive weights. Conjugate-closed rules carry nodes in +/-w pairs
/// of equal weight, w = 0 self-paired.
struct QuadratureRule {
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // > 0, same length
    bool conj_closed = false;

    std::size_t size() const { return nodes.size(); }
    void validate() const;
};

/// Composite trapezoid rule on a logarithmic grid: N/2 log-spaced positive
/// nodes over [omega_min, omega_max] mirrored to their negatives, each with
/// weight sqrt(width / (2 pi)) so that the squared weights carry the 1/(2 pi)
/// prefactor of the Gramian integrals.
QuadratureRule logtrap_rule(double omega_min, double omega_max, int N);

/// Disjoint (left, right) pair for the two implicit Gramian factors: the
/// right rule spans [omega_min, omega_max] and the left nodes sit at the
/// geometric midpoints (half a log step up), which keeps the divided
/// differences well defined.
std::pair<QuadratureRule, QuadratureRule> interleaved_rules(double omega_min,
                                                            double omega_max, int N);

/// The sampled data crossing the non-intrusive boundary: node/weight pairs
/// plus the transfer-function samples of G_sigmaA, G_B, G_C at them.
struct FrequencyDataset {
    QuadratureRule left;   // zeta_j, rho_j
    QuadratureRule right;  // omega_k, phi_k
    std::vector<CMatrix> GsA_left;   // p_y x m_x at i*zeta_j
    std::vector<CMatrix> GC_left;    // p   x m_x at i*zeta_j
    std::vector<CMatrix> GsA_right;  // p_y x m_x at i*omega_k
    std::vector<CMatrix> GB_right;   // p_y x m   at i*omega_k
    Variant variant = Variant::lyapunov;
    Eigen::Index p_y = 0, m_x = 0, p = 0, m = 0;

    void validate() const;
};

// Smallest |omega_k - zeta_j| must exceed 1e-10 * max node or sampling
// refuses with NodeCollision.
FrequencyDataset sample_dataset(const OracleTriple& oracles, const QuadratureRule& left,
                                const QuadratureRule& right);

}  // namespace qbt

#endif  // QBT_QUADRATURE_HPP
