#include "qbt/mateq.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qbt/schur.hpp"

namespace qbt {

std::string to_string(GramianKind kind) {
    switch (kind) {
        case GramianKind::lyapunov_P: return "lyapunov_P";
        case GramianKind::lyapunov_Q: return "lyapunov_Q";
        case GramianKind::bst_QW: return "bst_QW";
        case GramianKind::pr_QM: return "pr_QM";
        case GramianKind::pr_PN: return "pr_PN";
        case GramianKind::br_QJ: return "br_QJ";
        case GramianKind::br_PK: return "br_PK";
    }
    return "unknown";
}

Matrix GramianSolution::sqrt_factor() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(X);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

namespace {

void check_spd(const Matrix& R, const char* what) {
    if (R.rows() != R.cols()) throw DimensionMismatch(std::string(what) + " must be square");
    Eigen::SelfAdjointEigenSolver<Matrix> es(R);
    if (R.rows() > 0 && es.eigenvalues().minCoeff() <= 0.0)
        throw IndefiniteR(std::string(what) + " is not symmetric positive definite");
}

double spectral_abscissa_of(const Matrix& A) {
    if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
    return Eigen::EigenSolver<Matrix>(A, false).eigenvalues().real().maxCoeff();
}

}  // namespace

GramianSolution solve_lyapunov(const Matrix& A, const Matrix& RHS, GramianKind kind) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || RHS.rows() != n || RHS.cols() != n)
        throw DimensionMismatch("solve_lyapunov expects square A and conforming RHS");

    GramianSolution sol;
    sol.kind = kind;
    if (n == 0) {
        sol.X = Matrix(0, 0);
        sol.closed_loop_abscissa = -std::numeric_limits<double>::infinity();
        return sol;
    }

    Eigen::RealSchur<Matrix> rs(A);
    const Matrix& T = rs.matrixT();
    const Matrix& U = rs.matrixU();
    double abscissa = -std::numeric_limits<double>::infinity();
    for (const schur::Block& blk : schur::diagonal_blocks(T))
        abscissa = std::max(abscissa, blk.real_part);
    if (abscissa >= 0.0) throw UnstableA("Lyapunov equation requires a stable A");

    // A^T X + X A + RHS = 0 with X = U Xh U^T becomes T^T Xh + Xh T = -U^T RHS U.
    Matrix C = -U.transpose() * RHS * U;
    schur::solve_lyap_quasi_triangular(T, C, 1e-14 * std::max(1.0, A.norm()));
    Matrix X = U * C * U.transpose();
    X = 0.5 * (X + X.transpose());

    sol.X = std::move(X);
    sol.residual_norm = (A.transpose() * sol.X + sol.X * A + RHS).norm();
    sol.closed_loop_abscissa = abscissa;
    return sol;
}

GramianSolution solve_lyapunov_factored(const Matrix& A, const Matrix& F, GramianKind kind) {
    if (F.rows() != A.rows()) throw DimensionMismatch("factor must have n rows");
    return solve_lyapunov(A, F * F.transpose(), kind);
}

GramianSolution solve_are_stabilizing(const Matrix& A, const Matrix& Bhat, const Matrix& Shat,
                                      const Matrix& R, const Matrix& Q_const,
                                      GramianKind kind) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || Bhat.rows() != n || Shat.rows() != n || Q_const.rows() != n ||
        Q_const.cols() != n || Shat.cols() != R.rows() || Bhat.cols() != R.rows())
        throw DimensionMismatch("solve_are_stabilizing: inconsistent dimensions");
    check_spd(R, "R");

    // Expanded form: At^T X + X At + X G0 X + Qt = 0 with
    //   At = A + Bhat R^{-1} Shat^T,  G0 = Bhat R^{-1} Bhat^T,
    //   Qt = Q_const + Shat R^{-1} Shat^T.
    Eigen::LLT<Matrix> Rchol(R);
    const Matrix RinvBt = Rchol.solve(Bhat.transpose());
    const Matrix RinvSt = Rchol.solve(Shat.transpose());
    const Matrix At = A + Bhat * RinvSt;
    const Matrix G0 = Bhat * RinvBt;
    const Matrix Qt = Q_const + Shat * RinvSt;

    Matrix H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = At;
    H.topRightCorner(n, n) = G0;
    H.bottomLeftCorner(n, n) = -Qt;
    H.bottomRightCorner(n, n) = -At.transpose();

    Eigen::RealSchur<Matrix> rs(H);
    Matrix T = rs.matrixT();
    Matrix U = rs.matrixU();
    const Eigen::Index n_stable = schur::order_stable_first(T, U);
    if (n_stable != n)
        throw NoStabilizingSolution("Hamiltonian stable subspace has dimension " +
                                    std::to_string(n_stable) + ", expected " +
                                    std::to_string(n));

    const Matrix U1 = U.topLeftCorner(n, n);
    const Matrix U2 = U.bottomLeftCorner(n, n);
    Eigen::PartialPivLU<Matrix> lu(U1.transpose());
    if (lu.rcond() < 1e-13)
        throw NoStabilizingSolution("stable subspace basis block is numerically singular");
    Matrix X = lu.solve(U2.transpose()).transpose();  // X = U2 U1^{-1}
    X = 0.5 * (X + X.transpose());

    GramianSolution sol;
    sol.kind = kind;
    sol.X = std::move(X);
    const Matrix gain = sol.X * Bhat + Shat;  // n x r
    sol.residual_norm =
        (A.transpose() * sol.X + sol.X * A + Q_const + gain * Rchol.solve(gain.transpose()))
            .norm();
    sol.closed_loop_abscissa = spectral_abscissa_of(At + G0 * sol.X);
    if (!(sol.closed_loop_abscissa < 0.0))
        throw NoStabilizingSolution("closed-loop abscissa " +
                                    std::to_string(sol.closed_loop_abscissa) +
                                    " is not negative");
    return sol;
}

GramianSolution solve_bst_are(const StateSpaceSystem& sys, const Matrix& P) {
    if (sys.num_inputs() != sys.num_outputs())
        throw NonSquareSystem("balanced stochastic truncation requires m = p");
    if (sys.D.rows() == 0)
        throw SingularD("balanced stochastic truncation requires nonsingular D");
    Eigen::PartialPivLU<Matrix> lud(sys.D);
    if (lud.rcond() < 1e-13)
        throw SingularD("balanced stochastic truncation requires nonsingular D");

    const Matrix Bw = P * sys.C.transpose() + sys.B * sys.D.transpose();
    const Matrix R = sys.D * sys.D.transpose();
    const Matrix Zero_n = Matrix::Zero(sys.order(), sys.order());
    return solve_are_stabilizing(sys.A, -Bw, sys.C.transpose(), R, Zero_n,
                                 GramianKind::bst_QW);
}

std::pair<GramianSolution, GramianSolution> solve_pr_ares(const StateSpaceSystem& sys) {
    if (sys.num_inputs() != sys.num_outputs())
        throw NonSquareSystem("positive-real balancing requires m = p");
    const Matrix R = sys.D + sys.D.transpose();
    try {
        check_spd(R, "D + D^T");
    } catch (const IndefiniteR&) {
        throw NotPositiveReal("D + D^T is not SPD");
    }
    const Matrix Zero_n = Matrix::Zero(sys.order(), sys.order());
    try {
        GramianSolution QM = solve_are_stabilizing(sys.A, -sys.B, sys.C.transpose(), R, Zero_n,
                                                   GramianKind::pr_QM);
        GramianSolution PN = solve_are_stabilizing(sys.A.transpose(), -sys.C.transpose(),
                                                   sys.B, R, Zero_n, GramianKind::pr_PN);
        return {std::move(QM), std::move(PN)};
    } catch (const NoStabilizingSolution& e) {
        throw NotPositiveReal(e.what());
    }
}

std::pair<GramianSolution, GramianSolution> solve_br_ares(const StateSpaceSystem& sys) {
    const Eigen::Index m = sys.num_inputs(), p = sys.num_outputs();
    const Matrix RJ = Matrix::Identity(m, m) - sys.D.transpose() * sys.D;
    const Matrix RK = Matrix::Identity(p, p) - sys.D * sys.D.transpose();
    try {
        check_spd(RJ, "I - D^T D");
        check_spd(RK, "I - D D^T");
    } catch (const IndefiniteR&) {
        throw NotBoundedReal("feedthrough gain is not strictly below 1");
    }
    try {
        GramianSolution QJ = solve_are_stabilizing(sys.A, sys.B, sys.C.transpose() * sys.D, RJ,
                                                   sys.C.transpose() * sys.C,
                                                   GramianKind::br_QJ);
        GramianSolution PK = solve_are_stabilizing(sys.A.transpose(), sys.C.transpose(),
                                                   sys.B * sys.D.transpose(), RK,
                                                   sys.B * sys.B.transpose(),
                                                   GramianKind::br_PK);
        return {std::move(QJ), std::move(PK)};
    } catch (const NoStabilizingSolution& e) {
        throw NotBoundedReal(e.what());
    }
}

}  // namespace qbt
