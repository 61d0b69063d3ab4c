#include "qbt/spectral.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace qbt {

Variant variant_from_string(const std::string& name) {
    if (name == "lyapunov") return Variant::lyapunov;
    if (name == "bst") return Variant::bst;
    if (name == "prbt") return Variant::prbt;
    if (name == "brbt") return Variant::brbt;
    throw InvalidInput("unknown variant '" + name + "'");
}

std::string to_string(Variant variant) {
    switch (variant) {
        case Variant::lyapunov: return "lyapunov";
        case Variant::bst: return "bst";
        case Variant::prbt: return "prbt";
        case Variant::brbt: return "brbt";
    }
    return "unknown";
}

const StateSpaceSystem& SpectralFactorSet::factor(const std::string& name) const {
    auto it = factors.find(name);
    if (it == factors.end()) throw InvalidInput("no factor named '" + name + "'");
    return it->second;
}

const GramianSolution& SpectralFactorSet::gramian(const std::string& name) const {
    auto it = gramians.find(name);
    if (it == gramians.end()) throw InvalidInput("no gramian named '" + name + "'");
    return it->second;
}

TransferOracle::TransferOracle(OracleKind kind, Variant variant, const Matrix& A,
                               const Matrix& B, const Matrix& C)
    : kind_(kind),
      variant_(variant),
      eval_(StateSpaceSystem{A, B, C, Matrix::Zero(C.rows(), B.cols())}) {}

CMatrix popov(const StateSpaceSystem& sys, Complex s) {
    return eval_tf(sys, s) + eval_tf(sys, -s).transpose();
}

Matrix spd_sqrt(const Matrix& R) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(R);
    if (R.rows() > 0 && es.eigenvalues().minCoeff() <= 0.0)
        throw IndefiniteR("matrix square root requires an SPD argument");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
}

SpectralFactorSet build_factors(const StateSpaceSystem& sys, Variant variant) {
    SpectralFactorSet set;
    set.variant = variant;
    const Matrix& A = sys.A;
    const Matrix& B = sys.B;
    const Matrix& C = sys.C;
    const Matrix& D = sys.D;

    switch (variant) {
        case Variant::lyapunov: {
            set.gramians.emplace("Q", solve_lyapunov(A, C.transpose() * C,
                                                     GramianKind::lyapunov_Q));
            set.gramians.emplace("P", solve_lyapunov(A.transpose(), B * B.transpose(),
                                                     GramianKind::lyapunov_P));
            break;
        }
        case Variant::bst: {
            GramianSolution P = solve_lyapunov(A.transpose(), B * B.transpose(),
                                               GramianKind::lyapunov_P);
            GramianSolution QW = solve_bst_are(sys, P.X);
            const Matrix Bw = P.X * C.transpose() + B * D.transpose();
            const Matrix Cw = Eigen::PartialPivLU<Matrix>(D).solve(C - Bw.transpose() * QW.X);
            set.factors.emplace("W", StateSpaceSystem{A, Bw, Cw, D.transpose()});
            set.gramians.emplace("P", std::move(P));
            set.gramians.emplace("Q_W", std::move(QW));
            break;
        }
        case Variant::prbt: {
            auto [QM, PN] = solve_pr_ares(sys);
            const Matrix Rh = spd_sqrt(D + D.transpose());
            Eigen::LLT<Matrix> Rh_chol(Rh);  // R^{1/2} is itself SPD
            const Matrix Cm = Rh_chol.solve(C - B.transpose() * QM.X);
            const Matrix Bn =
                Rh_chol.solve((B - PN.X * C.transpose()).transpose()).transpose();
            set.factors.emplace("M", StateSpaceSystem{A, B, Cm, Rh});
            set.factors.emplace("N", StateSpaceSystem{A, Bn, C, Rh});
            set.gramians.emplace("Q_M", std::move(QM));
            set.gramians.emplace("P_N", std::move(PN));
            break;
        }
        case Variant::brbt: {
            auto [QJ, PK] = solve_br_ares(sys);
            const Eigen::Index m = sys.num_inputs(), p = sys.num_outputs();
            const Matrix RJ_half = spd_sqrt(Matrix::Identity(m, m) - D.transpose() * D);
            const Matrix RK_half = spd_sqrt(Matrix::Identity(p, p) - D * D.transpose());
            const Matrix Cj = -Eigen::LLT<Matrix>(RJ_half).solve(B.transpose() * QJ.X +
                                                                 D.transpose() * C);
            const Matrix Bk = -Eigen::LLT<Matrix>(RK_half)
                                   .solve((PK.X * C.transpose() + B * D.transpose())
                                              .transpose())
                                   .transpose();

            Matrix Cj_hat(p + m, sys.order());
            Cj_hat.topRows(p) = C;
            Cj_hat.bottomRows(m) = Cj;
            Matrix RJ_hat(p + m, m);
            RJ_hat.topRows(p) = D;
            RJ_hat.bottomRows(m) = RJ_half;
            Matrix Bk_hat(sys.order(), m + p);
            Bk_hat.leftCols(m) = B;
            Bk_hat.rightCols(p) = Bk;
            Matrix RK_hat(p, m + p);
            RK_hat.leftCols(m) = D;
            RK_hat.rightCols(p) = RK_half;

            set.factors.emplace("J", StateSpaceSystem{A, B, Cj, RJ_half});
            set.factors.emplace("K", StateSpaceSystem{A, Bk, C, RK_half});
            set.factors.emplace("J_hat", StateSpaceSystem{A, B, Cj_hat, RJ_hat});
            set.factors.emplace("K_hat", StateSpaceSystem{A, Bk_hat, C, RK_hat});
            set.gramians.emplace("Q_J", std::move(QJ));
            set.gramians.emplace("P_K", std::move(PK));
            break;
        }
    }
    return set;
}

namespace {

double zero_abscissa(const StateSpaceSystem& factor) {
    // Transmission zeros of a square factor with invertible feedthrough are
    // the eigenvalues of A - B D^{-1} C.
    const Matrix zero_matrix =
        factor.A - factor.B * Eigen::PartialPivLU<Matrix>(factor.D).solve(factor.C);
    if (zero_matrix.rows() == 0) return -std::numeric_limits<double>::infinity();
    return Eigen::EigenSolver<Matrix>(zero_matrix, false).eigenvalues().real().maxCoeff();
}

}  // namespace

FactorizationCheck verify_factorization(const SpectralFactorSet& set,
                                        const StateSpaceSystem& sys,
                                        const std::vector<double>& omega_grid) {
    FactorizationCheck out;
    std::vector<const StateSpaceSystem*> square_factors;

    for (double omega : omega_grid) {
        const Complex s(0.0, omega);
        double res = 0.0;
        switch (set.variant) {
            case Variant::lyapunov:
                break;
            case Variant::bst: {
                const StateSpaceSystem& W = set.factor("W");
                const CMatrix lhs = eval_tf(sys, s) * eval_tf(sys, -s).transpose();
                const CMatrix rhs = eval_tf(W, -s).transpose() * eval_tf(W, s);
                res = (lhs - rhs).norm();
                break;
            }
            case Variant::prbt: {
                const StateSpaceSystem& M = set.factor("M");
                const StateSpaceSystem& N = set.factor("N");
                const CMatrix phi = popov(sys, s);
                const double rM = (phi - eval_tf(M, -s).transpose() * eval_tf(M, s)).norm();
                const double rN = (phi - eval_tf(N, s) * eval_tf(N, -s).transpose()).norm();
                res = std::max(rM, rN);
                break;
            }
            case Variant::brbt: {
                const StateSpaceSystem& J = set.factor("J");
                const StateSpaceSystem& K = set.factor("K");
                const Eigen::Index m = sys.num_inputs(), p = sys.num_outputs();
                const CMatrix G = eval_tf(sys, s);
                const CMatrix Gm = eval_tf(sys, -s);
                const CMatrix lhsJ =
                    CMatrix::Identity(m, m) - Gm.transpose() * G;
                const CMatrix lhsK = CMatrix::Identity(p, p) - G * Gm.transpose();
                const double rJ =
                    (lhsJ - eval_tf(J, -s).transpose() * eval_tf(J, s)).norm();
                const double rK =
                    (lhsK - eval_tf(K, s) * eval_tf(K, -s).transpose()).norm();
                res = std::max(rJ, rK);
                break;
            }
        }
        out.max_residual = std::max(out.max_residual, res);
    }

    for (const auto& [name, factor] : set.factors) {
        if (factor.D.rows() != factor.D.cols()) continue;  // stacked systems
        const double za = zero_abscissa(factor);
        out.worst_zero_real_part = std::max(out.worst_zero_real_part, za);
        if (za >= 0.0) out.factors_minimum_phase = false;
    }
    return out;
}

OracleTriple make_oracles(const StateSpaceSystem& sys, const SpectralFactorSet& set) {
    const Variant v = set.variant;
    const Matrix& A = sys.A;
    switch (v) {
        case Variant::lyapunov:
            return {TransferOracle(OracleKind::GsA, v, A, sys.B, sys.C),
                    TransferOracle(OracleKind::GB, v, A, sys.B, sys.C),
                    TransferOracle(OracleKind::GC, v, A, sys.B, sys.C)};
        case Variant::bst: {
            const Matrix& Cw = set.factor("W").C;
            return {TransferOracle(OracleKind::GsA, v, A, sys.B, Cw),
                    TransferOracle(OracleKind::GB, v, A, sys.B, Cw),
                    TransferOracle(OracleKind::GC, v, A, sys.B, sys.C)};
        }
        case Variant::prbt: {
            const Matrix& Cm = set.factor("M").C;
            const Matrix& Bn = set.factor("N").B;
            return {TransferOracle(OracleKind::GsA, v, A, Bn, Cm),
                    TransferOracle(OracleKind::GB, v, A, sys.B, Cm),
                    TransferOracle(OracleKind::GC, v, A, Bn, sys.C)};
        }
        case Variant::brbt: {
            const Matrix& Cj_hat = set.factor("J_hat").C;
            const Matrix& Bk_hat = set.factor("K_hat").B;
            return {TransferOracle(OracleKind::GsA, v, A, Bk_hat, Cj_hat),
                    TransferOracle(OracleKind::GB, v, A, sys.B, Cj_hat),
                    TransferOracle(OracleKind::GC, v, A, Bk_hat, sys.C)};
        }
    }
    throw InvalidInput("unknown variant");
}

OracleTriple make_oracles(const StateSpaceSystem& sys, Variant variant) {
    return make_oracles(sys, build_factors(sys, variant));
}

double cascade_oracle_check(const StateSpaceSystem& sys, Variant variant,
                            const std::vector<Complex>& grid) {
    const SpectralFactorSet set = build_factors(sys, variant);
    const OracleTriple oracles = make_oracles(sys, set);

    StateSpaceSystem cascade;
    switch (variant) {
        case Variant::lyapunov:
            cascade = strictly_proper(sys);
            break;
        case Variant::bst:
            // W(-s)^{-T} G_inf(s)
            cascade = series(inverse(dual(set.factor("W"))), strictly_proper(sys));
            break;
        case Variant::prbt:
            // M(-s)^{-T} N_inf(s)
            cascade = series(inverse(dual(set.factor("M"))), strictly_proper(set.factor("N")));
            break;
        case Variant::brbt: {
            // Left factor [[I, 0], [G_inf(-s)^T, J(-s)^T]] realized from the
            // stacked J, inverted, cascaded with [[G_inf, K_inf], [-D^T G_inf,
            // -D^T K_inf]].
            const Eigen::Index m = sys.num_inputs(), p = sys.num_outputs();
            const Eigen::Index n = sys.order();
            const StateSpaceSystem& J = set.factor("J");
            const StateSpaceSystem& K_hat = set.factor("K_hat");

            Matrix BF(n, p + m);
            BF.leftCols(p) = -sys.C.transpose();
            BF.rightCols(m) = -J.C.transpose();
            Matrix CF = Matrix::Zero(p + m, n);
            CF.bottomRows(m) = sys.B.transpose();
            Matrix DF = Matrix::Zero(p + m, p + m);
            DF.topLeftCorner(p, p).setIdentity();
            DF.bottomRightCorner(m, m) = J.D;
            StateSpaceSystem F{-sys.A.transpose(), BF, CF, DF};

            Matrix CR(p + m, n);
            CR.topRows(p) = sys.C;
            CR.bottomRows(m) = -sys.D.transpose() * sys.C;
            StateSpaceSystem right{sys.A, K_hat.B, CR, Matrix::Zero(p + m, m + p)};
            cascade = series(inverse(F), right);
            break;
        }
    }

    const StateSpaceSystem stable = stable_part(cascade);
    double max_dev = 0.0;
    for (Complex s : grid) {
        const CMatrix ref = oracles.G_sigmaA(s);
        const CMatrix got = eval_tf(stable, s);
        max_dev = std::max(max_dev, (ref - got).cwiseAbs().maxCoeff());
    }
    return max_dev;
}

}  // namespace qbt
