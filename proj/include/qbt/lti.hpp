#ifndef QBT_LTI_HPP
#define QBT_LTI_HPP

#include <complex>
#include <memory>

#include <Eigen/Core>

#include "qbt/errors.hpp"

namespace qbt {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Continuous-time LTI system in state-space form,
///   x' = A x + B u,   y = C x + D u,
/// with n states, m inputs, p outputs. The realization is stored densely;
/// n = 0 encodes a pure gain y = D u.
struct StateSpaceSystem {
    Matrix A, B, C, D;

    StateSpaceSystem() = default;
    StateSpaceSystem(Matrix A_, Matrix B_, Matrix C_, Matrix D_);

    Eigen::Index order() const { return A.rows(); }
    Eigen::Index num_inputs() const { return B.cols(); }
    Eigen::Index num_outputs() const { return C.rows(); }

    // Spectral abscissa of A, i.e. max Re(eig(A)); -inf for n = 0.
    double spectral_abscissa() const;
    bool is_stable() const { return order() == 0 || spectral_abscissa() < 0.0; }
};

/// One transfer-function sample: the point s and the p x m value there.
/// For a real system sampled on the imaginary axis, value(-iw) equals the
/// conjugate of value(iw).
struct FrequencyPoint {
    Complex s;
    CMatrix value;
};

// G(s) = C (sI - A)^{-1} B + D via one dense LU solve with m right-hand
// sides; no inverse is formed. Throws SingularResolvent when s is
// numerically a pole.
CMatrix eval_tf(const StateSpaceSystem& sys, Complex s);

// (A, B, C, 0): subtracts the feedthrough.
StateSpaceSystem strictly_proper(const StateSpaceSystem& sys);

// (-A^T, -C^T, B^T, D^T), realizing G(-s)^T.
StateSpaceSystem dual(const StateSpaceSystem& sys);

// Realization of G(s)^{-1}; requires square, nonsingular D.
StateSpaceSystem inverse(const StateSpaceSystem& sys);

// Cascade G1(s) * G2(s) (u -> sys2 -> sys1 -> y), block upper-triangular.
StateSpaceSystem series(const StateSpaceSystem& sys1, const StateSpaceSystem& sys2);

// Strictly proper stable part of the transfer function: orders the real
// Schur form stable-first, decouples the antistable block with a Sylvester
// solve and returns the stable subsystem with zero feedthrough. Throws
// ImaginaryAxisEigenvalue when some eigenvalue of A is within
// 1e-8 * ||A||_F of the imaginary axis.
StateSpaceSystem stable_part(const StateSpaceSystem& sys);

// Complementary antistable remainder (zero feedthrough); stable_part plus
// this reproduces the strictly proper transfer function.
StateSpaceSystem antistable_part(const StateSpaceSystem& sys);

/// Estimate of sup_w sigma_max(G(iw)) for a stable system: a log-spaced
/// coarse grid over [1e-6, 1e8] augmented with w = 0 and the w -> inf limit
/// sigma_max(D), then golden-section refinement around the grid maximizer.
/// The result is never below the largest sampled value.
double hinf_norm(const StateSpaceSystem& sys, double rel_tol = 1e-6);

/// Caches a Hessenberg reduction of A so that repeated transfer-function
/// evaluations cost O(n^2 (1 + m)) per point instead of a fresh O(n^3)
/// factorization. Copies share the reduction; safe to call concurrently.
class FrequencyEvaluator {
  public:
    explicit FrequencyEvaluator(const StateSpaceSystem& sys);

    CMatrix operator()(Complex s) const;
    Eigen::Index rows() const;
    Eigen::Index cols() const;

  private:
    struct Shared;
    std::shared_ptr<const Shared> shared_;
};

}  // namespace qbt

#endif  // QBT_LTI_HPP
