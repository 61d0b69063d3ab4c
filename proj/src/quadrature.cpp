#include "qbt/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace qbt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void QuadratureRule::validate() const {
    if (nodes.size() != weights.size())
        throw InvalidInput("rule nodes and weights must have equal length");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(weights[i] > 0.0)) throw InvalidInput("rule weights must be positive");
        if (i > 0 && !(nodes[i] > nodes[i - 1]))
            throw InvalidInput("rule nodes must be strictly increasing");
    }
    if (conj_closed) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::size_t j = nodes.size() - 1 - i;
            const double scale = std::max(1.0, std::abs(nodes[i]));
            if (std::abs(nodes[i] + nodes[j]) > 1e-12 * scale ||
                std::abs(weights[i] - weights[j]) > 1e-12 * std::abs(weights[i]))
                throw NotConjugateClosed("nodes do not mirror in +/- pairs of equal weight");
        }
    }
}

QuadratureRule logtrap_rule(double omega_min, double omega_max, int N) {
    if (!(omega_min > 0.0) || !(omega_min < omega_max))
        throw InvalidRange("need 0 < omega_min < omega_max");
    if (N < 4 || N % 2 != 0) throw OddN("node count must be even and at least 4");

    const int half = N / 2;
    std::vector<double> pos(half);
    const double lg_lo = std::log10(omega_min), lg_hi = std::log10(omega_max);
    for (int i = 0; i < half; ++i)
        pos[i] = std::pow(10.0, lg_lo + (lg_hi - lg_lo) * i / (half - 1));

    std::vector<double> width(half);
    width[0] = (pos[1] - pos[0]) / 2.0;
    for (int i = 1; i + 1 < half; ++i) width[i] = (pos[i + 1] - pos[i - 1]) / 2.0;
    width[half - 1] = (pos[half - 1] - pos[half - 2]) / 2.0;

    QuadratureRule rule;
    rule.conj_closed = true;
    rule.nodes.resize(N);
    rule.weights.resize(N);
    for (int i = 0; i < half; ++i) {
        const double w = std::sqrt(width[i] / kTwoPi);
        rule.nodes[half - 1 - i] = -pos[i];
        rule.weights[half - 1 - i] = w;
        rule.nodes[half + i] = pos[i];
        rule.weights[half + i] = w;
    }
    rule.validate();
    return rule;
}

std::pair<QuadratureRule, QuadratureRule> interleaved_rules(double omega_min,
                                                            double omega_max, int N) {
    QuadratureRule right = logtrap_rule(omega_min, omega_max, N);
    const double step = std::pow(omega_max / omega_min, 1.0 / (N / 2 - 1));
    QuadratureRule left =
        logtrap_rule(omega_min * std::sqrt(step), omega_max * std::sqrt(step), N);
    return {std::move(left), std::move(right)};
}

void FrequencyDataset::validate() const {
    left.validate();
    right.validate();
    if (GsA_left.size() != left.size() || GC_left.size() != left.size() ||
        GsA_right.size() != right.size() || GB_right.size() != right.size())
        throw InvalidInput("dataset sample counts do not match the rules");
    auto check_shape = [](const std::vector<CMatrix>& samples, Eigen::Index r,
                          Eigen::Index c) {
        for (const CMatrix& S : samples) {
            if (S.rows() != r || S.cols() != c)
                throw DimensionMismatch("dataset sample shape mismatch");
            if (!S.allFinite()) throw InvalidInput("dataset samples must be finite");
        }
    };
    check_shape(GsA_left, p_y, m_x);
    check_shape(GC_left, p, m_x);
    check_shape(GsA_right, p_y, m_x);
    check_shape(GB_right, p_y, m);
}

FrequencyDataset sample_dataset(const OracleTriple& oracles, const QuadratureRule& left,
                                const QuadratureRule& right) {
    left.validate();
    right.validate();

    double max_node = 0.0;
    for (double z : left.nodes) max_node = std::max(max_node, std::abs(z));
    for (double w : right.nodes) max_node = std::max(max_node, std::abs(w));
    for (double w : right.nodes)
        for (double z : left.nodes)
            if (std::abs(w - z) <= 1e-10 * max_node)
                throw NodeCollision("left and right nodes closer than the gap tolerance");

    if (oracles.G_B.rows() != oracles.G_sigmaA.rows() ||
        oracles.G_C.cols() != oracles.G_sigmaA.cols())
        throw DimensionMismatch("oracle shapes are inconsistent");

    FrequencyDataset data;
    data.left = left;
    data.right = right;
    data.variant = oracles.G_sigmaA.variant();
    data.p_y = oracles.G_sigmaA.rows();
    data.m_x = oracles.G_sigmaA.cols();
    data.p = oracles.G_C.rows();
    data.m = oracles.G_B.cols();

    data.GsA_left.reserve(left.size());
    data.GC_left.reserve(left.size());
    for (double z : left.nodes) {
        const Complex s(0.0, z);
        data.GsA_left.push_back(oracles.G_sigmaA(s));
        data.GC_left.push_back(oracles.G_C(s));
    }
    data.GsA_right.reserve(right.size());
    data.GB_right.reserve(right.size());
    for (double w : right.nodes) {
        const Complex s(0.0, w);
        data.GsA_right.push_back(oracles.G_sigmaA(s));
        data.GB_right.push_back(oracles.G_B(s));
    }
    data.validate();
    return data;
}

}  // namespace qbt
