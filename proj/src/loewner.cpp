#include "qbt/loewner.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace qbt {

std::string Provenance::str() const {
    if (type == Type::intrusive) return "intrusive";
    return "quadrature(" + std::to_string(N_left) + "," + std::to_string(N_right) + ")";
}

LoewnerQuadruple assemble_loewner(const FrequencyDataset& data) {
    data.validate();
    const Eigen::Index K = static_cast<Eigen::Index>(data.right.size());
    const Eigen::Index J = static_cast<Eigen::Index>(data.left.size());
    const Eigen::Index p_y = data.p_y, m_x = data.m_x;

    double max_node = 0.0;
    for (double z : data.left.nodes) max_node = std::max(max_node, std::abs(z));
    for (double w : data.right.nodes) max_node = std::max(max_node, std::abs(w));

    LoewnerQuadruple q;
    q.p_y = p_y;
    q.m_x = m_x;
    q.K = K;
    q.J = J;
    q.p = data.p;
    q.m = data.m;
    q.L.resize(p_y * K, m_x * J);
    q.M.resize(p_y * K, m_x * J);
    q.H.resize(p_y * K, data.m);
    q.G.resize(data.p, m_x * J);

    for (Eigen::Index k = 0; k < K; ++k) {
        const double wk = data.right.nodes[k];
        const double phi = data.right.weights[k];
        const Complex iwk(0.0, wk);
        for (Eigen::Index j = 0; j < J; ++j) {
            const double zj = data.left.nodes[j];
            const double rho = data.left.weights[j];
            const Complex izj(0.0, zj);
            if (std::abs(wk - zj) <= 1e-10 * max_node)
                throw NodeCollision("divided difference at coincident nodes");
            const Complex denom = iwk - izj;
            q.L.block(k * p_y, j * m_x, p_y, m_x) =
                (-phi * rho) * (data.GsA_right[k] - data.GsA_left[j]) / denom;
            q.M.block(k * p_y, j * m_x, p_y, m_x) =
                (-phi * rho) * (iwk * data.GsA_right[k] - izj * data.GsA_left[j]) / denom;
        }
        q.H.middleRows(k * p_y, p_y) = phi * data.GB_right[k];
    }
    for (Eigen::Index j = 0; j < J; ++j)
        q.G.middleCols(j * m_x, m_x) = data.left.weights[j] * data.GC_left[j];
    return q;
}

namespace {

// Conjugate pair bookkeeping for one rule: output block t reads from
// (plus[t], minus[t]); self-paired zero nodes have plus == minus.
struct PairOrder {
    std::vector<Eigen::Index> plus, minus;
};

PairOrder pair_order(const QuadratureRule& rule) {
    const Eigen::Index n = static_cast<Eigen::Index>(rule.size());
    double max_node = 1.0;
    for (double x : rule.nodes) max_node = std::max(max_node, std::abs(x));
    PairOrder order;
    if (n % 2 == 1) {
        const Eigen::Index mid = n / 2;
        if (std::abs(rule.nodes[mid]) > 1e-14 * max_node)
            throw NotConjugateClosed("odd rule without a zero node");
        order.plus.push_back(mid);
        order.minus.push_back(mid);
    }
    for (Eigen::Index t = 0; t < n / 2; ++t) {
        const Eigen::Index plus = (n + 1) / 2 + t;
        const Eigen::Index minus = n / 2 - 1 - t;
        if (std::abs(rule.nodes[plus] + rule.nodes[minus]) > 1e-12 * max_node)
            throw NotConjugateClosed("nodes do not occur in +/- pairs");
        order.plus.push_back(plus);
        order.minus.push_back(minus);
    }
    return order;
}

void check_sample_symmetry(const std::vector<CMatrix>& samples, const PairOrder& order,
                           const char* what) {
    double scale = 0.0;
    for (const CMatrix& S : samples) scale = std::max(scale, S.cwiseAbs().maxCoeff());
    for (std::size_t t = 0; t < order.plus.size(); ++t) {
        const CMatrix& Sp = samples[order.plus[t]];
        const CMatrix& Sm = samples[order.minus[t]];
        if ((Sp.conjugate() - Sm).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300))
            throw NotConjugateClosed(std::string(what) +
                                     " samples are not conjugate-symmetric across +/- nodes");
    }
}

// Left-multiplication by the pair unitary, block size bs.
CMatrix transform_rows(const CMatrix& X, const PairOrder& order, Eigen::Index bs) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex iu(0.0, 1.0);
    CMatrix out(X.rows(), X.cols());
    Eigen::Index at = 0;
    for (std::size_t t = 0; t < order.plus.size(); ++t) {
        const Eigen::Index ip = order.plus[t] * bs, im = order.minus[t] * bs;
        if (order.plus[t] == order.minus[t]) {
            out.middleRows(at, bs) = X.middleRows(ip, bs);
            at += bs;
            continue;
        }
        out.middleRows(at, bs) =
            inv_sqrt2 * (X.middleRows(ip, bs) + X.middleRows(im, bs));
        out.middleRows(at + bs, bs) =
            inv_sqrt2 * iu * (X.middleRows(ip, bs) - X.middleRows(im, bs));
        at += 2 * bs;
    }
    return out;
}

// Right-multiplication by the conjugate transpose of the pair unitary.
CMatrix transform_cols(const CMatrix& X, const PairOrder& order, Eigen::Index bs) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex iu(0.0, 1.0);
    CMatrix out(X.rows(), X.cols());
    Eigen::Index at = 0;
    for (std::size_t t = 0; t < order.plus.size(); ++t) {
        const Eigen::Index ip = order.plus[t] * bs, im = order.minus[t] * bs;
        if (order.plus[t] == order.minus[t]) {
            out.middleCols(at, bs) = X.middleCols(ip, bs);
            at += bs;
            continue;
        }
        out.middleCols(at, bs) =
            inv_sqrt2 * (X.middleCols(ip, bs) + X.middleCols(im, bs));
        out.middleCols(at + bs, bs) =
            inv_sqrt2 * (-iu) * (X.middleCols(ip, bs) - X.middleCols(im, bs));
        at += 2 * bs;
    }
    return out;
}

void strip_imaginary(CMatrix& X, const char* what) {
    const double norm = X.norm();
    const double imag_norm = X.imag().norm();
    if (imag_norm > 1e-9 * std::max(norm, 1e-300))
        throw ResidualImaginary(std::string(what) + " kept an imaginary part of " +
                                std::to_string(imag_norm / std::max(norm, 1e-300)) +
                                " relative");
    X.imag().setZero();
}

}  // namespace

LoewnerQuadruple realify(const LoewnerQuadruple& q, const FrequencyDataset& data) {
    if (!data.left.conj_closed || !data.right.conj_closed)
        throw NotConjugateClosed("realify requires conjugate-closed rules on both sides");
    const PairOrder left = pair_order(data.left);
    const PairOrder right = pair_order(data.right);
    check_sample_symmetry(data.GsA_left, left, "G_sigmaA left");
    check_sample_symmetry(data.GC_left, left, "G_C left");
    check_sample_symmetry(data.GsA_right, right, "G_sigmaA right");
    check_sample_symmetry(data.GB_right, right, "G_B right");

    LoewnerQuadruple out = q;
    out.L = transform_cols(transform_rows(q.L, right, q.p_y), left, q.m_x);
    out.M = transform_cols(transform_rows(q.M, right, q.p_y), left, q.m_x);
    out.H = transform_rows(q.H, right, q.p_y);
    out.G = transform_cols(q.G, left, q.m_x);
    strip_imaginary(out.L, "L");
    strip_imaginary(out.M, "M");
    strip_imaginary(out.H, "H");
    strip_imaginary(out.G, "G");
    return out;
}

ReducedModel reduce(const LoewnerQuadruple& q, Eigen::Index r,
                    const std::optional<Matrix>& feedthrough) {
    if (r < 1) throw InvalidInput("reduction order must be at least 1");
    Eigen::BDCSVD<CMatrix> svd(q.L, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();

    const double rank_floor =
        sv.size() > 0 ? sv(0) * std::max(q.L.rows(), q.L.cols()) *
                            std::numeric_limits<double>::epsilon()
                      : 0.0;
    Eigen::Index numerical_rank = 0;
    while (numerical_rank < sv.size() && sv(numerical_rank) > rank_floor) ++numerical_rank;
    if (r > numerical_rank)
        throw RankDeficient("requested order " + std::to_string(r) + " exceeds the " +
                            std::to_string(numerical_rank) + " positive singular values");
    if (r < sv.size() && !(sv(r - 1) > sv(r) * (1.0 + 1e-10)))
        throw DegenerateGap("singular values " + std::to_string(r) + " and " +
                            std::to_string(r + 1) + " are not separated");

    const CMatrix Z1 = svd.matrixU().leftCols(r);
    const CMatrix Y1 = svd.matrixV().leftCols(r);
    const Eigen::VectorXd si = sv.head(r).cwiseSqrt().cwiseInverse();

    CMatrix Ar = si.asDiagonal() * (Z1.adjoint() * q.M * Y1) * si.asDiagonal();
    CMatrix Br = si.asDiagonal() * (Z1.adjoint() * q.H);
    CMatrix Cr = (q.G * Y1) * si.asDiagonal();
    const double scale = std::max({Ar.norm(), Br.norm(), Cr.norm(), 1e-300});
    const double imag_norm = std::max({Ar.imag().norm(), Br.imag().norm(), Cr.imag().norm()});
    if (imag_norm > 1e-8 * scale)
        throw ResidualImaginary(
            "reduced matrices are not numerically real; realify the quadruple first");

    ReducedModel rom;
    rom.Ar = Ar.real();
    rom.Br = Br.real();
    rom.Cr = Cr.real();
    rom.Dr = feedthrough.value_or(Matrix::Zero(q.p, q.m));
    if (rom.Dr.rows() != q.p || rom.Dr.cols() != q.m)
        throw DimensionMismatch("feedthrough must be p x m");
    rom.singular_values.assign(sv.data(), sv.data() + sv.size());
    return rom;
}

ReducedModel genquadbt_pipeline(const OracleTriple& oracles, const QuadratureRule& left,
                                const QuadratureRule& right, Eigen::Index r,
                                const std::optional<Matrix>& feedthrough) {
    const FrequencyDataset data = sample_dataset(oracles, left, right);
    LoewnerQuadruple q = assemble_loewner(data);
    if (left.conj_closed && right.conj_closed) q = realify(q, data);
    ReducedModel rom = reduce(q, r, feedthrough);
    rom.variant = data.variant;
    rom.provenance.type = Provenance::Type::quadrature;
    rom.provenance.N_left = static_cast<int>(left.size());
    rom.provenance.N_right = static_cast<int>(right.size());
    return rom;
}

}  // namespace qbt
