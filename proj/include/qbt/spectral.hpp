#ifndef QBT_SPECTRAL_HPP
#define QBT_SPECTRAL_HPP

#include <map>
#include <string>
#include <vector>

#include "qbt/lti.hpp"
#include "qbt/mateq.hpp"

namespace qbt {

enum class Variant { lyapunov, bst, prbt, brbt };

Variant variant_from_string(const std::string& name);
std::string to_string(Variant variant);

/// State-space realizations of the spectral factors attached to one system
/// and balancing variant, together with the Gramians that produced them.
/// All factor realizations share the A matrix of the source system.
///   bst : W                with  G(s) G(-s)^T = W(-s)^T W(s)
///   prbt: M, N             with  Phi(s) = M(-s)^T M(s) = N(s) N(-s)^T
///   brbt: J, K, J_hat, K_hat with I - G(-s)^T G(s) = J(-s)^T J(s) and the
///         dual identity for K; the stacked systems carry the BR-ARE
///         Lyapunov reinterpretation.
/// The lyapunov variant has no factors, only the Gramians (P, Q).
struct SpectralFactorSet {
    Variant variant = Variant::lyapunov;
    std::map<std::string, StateSpaceSystem> factors;
    std::map<std::string, GramianSolution> gramians;

    const StateSpaceSystem& factor(const std::string& name) const;
    const GramianSolution& gramian(const std::string& name) const;
};

enum class OracleKind { GsA, GB, GC };

/// Immutable evaluator for one of the three sampled transfer functions of
/// the data-driven framework. Always strictly proper; evaluation goes
/// through a cached Hessenberg reduction, so copies are cheap and calls are
/// safe from concurrent threads.
class TransferOracle {
  public:
    TransferOracle(OracleKind kind, Variant variant, const Matrix& A, const Matrix& B,
                   const Matrix& C);

    CMatrix operator()(Complex s) const { return eval_(s); }
    Eigen::Index rows() const { return eval_.rows(); }
    Eigen::Index cols() const { return eval_.cols(); }
    OracleKind kind() const { return kind_; }
    Variant variant() const { return variant_; }

  private:
    OracleKind kind_;
    Variant variant_;
    FrequencyEvaluator eval_;
};

struct OracleTriple {
    TransferOracle G_sigmaA;
    TransferOracle G_B;
    TransferOracle G_C;
};

// Popov function Phi(s) = G(s) + G(-s)^T.
CMatrix popov(const StateSpaceSystem& sys, Complex s);

// Builds the spectral-factor realizations for the requested variant.
// Matrix square roots of R, R_J, R_K are the principal SPD square roots.
SpectralFactorSet build_factors(const StateSpaceSystem& sys, Variant variant);

// Max Frobenius residual of the variant's factorization identities over
// the grid of frequencies, also checking that every square factor is
// minimum phase (transmission zeros in the open left half-plane, reported
// through the returned flag rather than an exception).
struct FactorizationCheck {
    double max_residual = 0.0;
    bool factors_minimum_phase = true;
    double worst_zero_real_part = -std::numeric_limits<double>::infinity();
};
FactorizationCheck verify_factorization(const SpectralFactorSet& factors,
                                        const StateSpaceSystem& sys,
                                        const std::vector<double>& omega_grid);

// The three sampling oracles of the data-driven framework, built from the
// decoupled stable-part realizations (never from numerical stable-part
// extraction). For the lyapunov variant all three equal the strictly
// proper part of G.
OracleTriple make_oracles(const StateSpaceSystem& sys, const SpectralFactorSet& factors);
OracleTriple make_oracles(const StateSpaceSystem& sys, Variant variant);

// Anti-regression oracle: independently builds the full cascaded
// realization (dual/inverse/series), extracts its stable part numerically,
// and returns the max entrywise deviation from the G_sigmaA oracle over the
// grid points.
double cascade_oracle_check(const StateSpaceSystem& sys, Variant variant,
                            const std::vector<Complex>& grid);

// Principal SPD square root through the symmetric eigendecomposition.
Matrix spd_sqrt(const Matrix& R);

}  // namespace qbt

#endif  // QBT_SPECTRAL_HPP
