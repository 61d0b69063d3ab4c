#include "qbt/intrusive.hpp"

#include <Eigen/Dense>

namespace qbt {

GramianPair gramian_pair(const StateSpaceSystem& sys, Variant variant) {
    GramianPair pair;
    pair.variant = variant;
    switch (variant) {
        case Variant::lyapunov:
            pair.P_X = solve_lyapunov(sys.A.transpose(), sys.B * sys.B.transpose(),
                                      GramianKind::lyapunov_P);
            pair.Q_Y = solve_lyapunov(sys.A, sys.C.transpose() * sys.C,
                                      GramianKind::lyapunov_Q);
            break;
        case Variant::bst:
            pair.P_X = solve_lyapunov(sys.A.transpose(), sys.B * sys.B.transpose(),
                                      GramianKind::lyapunov_P);
            pair.Q_Y = solve_bst_are(sys, pair.P_X.X);
            break;
        case Variant::prbt: {
            auto [QM, PN] = solve_pr_ares(sys);
            pair.P_X = std::move(PN);
            pair.Q_Y = std::move(QM);
            break;
        }
        case Variant::brbt: {
            auto [QJ, PK] = solve_br_ares(sys);
            pair.P_X = std::move(PK);
            pair.Q_Y = std::move(QJ);
            break;
        }
    }
    pair.U_X = pair.P_X.sqrt_factor();
    pair.L_Y = pair.Q_Y.sqrt_factor();
    return pair;
}

Eigen::VectorXd hankel_singular_values(const GramianPair& pair) {
    return Eigen::BDCSVD<Matrix>(pair.L_Y.transpose() * pair.U_X).singularValues();
}

ReducedModel sqrt_bt(const StateSpaceSystem& sys, const GramianPair& pair, Eigen::Index r) {
    const Eigen::Index n = sys.order();
    if (r < 1 || r > n) throw InvalidInput("reduction order must satisfy 1 <= r <= n");

    Eigen::BDCSVD<Matrix> svd(pair.L_Y.transpose() * pair.U_X,
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double rank_floor = sv(0) * n * std::numeric_limits<double>::epsilon();
    if (!(sv(r - 1) > rank_floor))
        throw RankDeficient("sigma_r vanishes at the requested order");
    if (r < n && !(sv(r - 1) > sv(r) * (1.0 + 1e-10)))
        throw DegenerateGap("sigma_r equals sigma_{r+1}; pick an order at a gap");

    const Eigen::VectorXd si = sv.head(r).cwiseSqrt().cwiseInverse();
    const Matrix Wr = pair.L_Y * svd.matrixU().leftCols(r) * si.asDiagonal();
    const Matrix Vr = pair.U_X * svd.matrixV().leftCols(r) * si.asDiagonal();

    ReducedModel rom;
    rom.Ar = Wr.transpose() * sys.A * Vr;
    rom.Br = Wr.transpose() * sys.B;
    rom.Cr = sys.C * Vr;
    rom.Dr = sys.D;
    rom.singular_values.assign(sv.data(), sv.data() + sv.size());
    rom.variant = pair.variant;
    rom.provenance.type = Provenance::Type::intrusive;
    return rom;
}

ReducedModel sqrt_bt(const StateSpaceSystem& sys, Variant variant, Eigen::Index r) {
    return sqrt_bt(sys, gramian_pair(sys, variant), r);
}

}  // namespace qbt
