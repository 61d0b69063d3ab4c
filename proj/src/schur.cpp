#include "qbt/schur.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "qbt/errors.hpp"

namespace qbt {
namespace schur {

namespace {

// Solves A X + sign * X B = C for small p x q blocks (p, q <= 2) through the
// Kronecker form. Throws when the separation pivot falls below pivot_floor.
Eigen::MatrixXd solve_small_sylvester(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                      const Eigen::MatrixXd& C, double sign,
                                      double pivot_floor) {
    const Eigen::Index p = A.rows();
    const Eigen::Index q = B.rows();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(p * q, p * q);
    // vec(A X) = (I_q kron A) vec(X), vec(X B) = (B^T kron I_p) vec(X)
    for (Eigen::Index j = 0; j < q; ++j) {
        K.block(j * p, j * p, p, p) = A;
        for (Eigen::Index i = 0; i < q; ++i) {
            K.block(j * p, i * p, p, p).diagonal().array() += sign * B(i, j);
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (min_pivot <= pivot_floor) {
        throw IllConditionedSeparation("pivot " + std::to_string(min_pivot) +
                                       " below floor " + std::to_string(pivot_floor));
    }
    Eigen::VectorXd x = lu.solve(Eigen::Map<const Eigen::VectorXd>(C.data(), p * q));
    return Eigen::Map<const Eigen::MatrixXd>(x.data(), p, q);
}

double block_real_part(const Eigen::MatrixXd& T, Eigen::Index start, Eigen::Index size) {
    if (size == 1) return T(start, start);
    return 0.5 * (T(start, start) + T(start + 1, start + 1));
}

// Direct swap of the adjacent diagonal blocks at `start` with sizes p, q.
// [X; I] spans the invariant subspace of the trailing block; its QR factor
// carries it to the front.
void swap_adjacent_blocks(Eigen::MatrixXd& T, Eigen::MatrixXd& U, Eigen::Index start,
                          Eigen::Index p, Eigen::Index q, double pivot_floor) {
    const Eigen::Index n = T.rows();
    const Eigen::MatrixXd A11 = T.block(start, start, p, p);
    const Eigen::MatrixXd A12 = T.block(start, start + p, p, q);
    const Eigen::MatrixXd A22 = T.block(start + p, start + p, q, q);

    // A11 X - X A22 = -A12
    Eigen::MatrixXd X = solve_small_sylvester(A11, A22, -A12, -1.0, pivot_floor);

    Eigen::MatrixXd M(p + q, q);
    M.topRows(p) = X;
    M.bottomRows(q) = Eigen::MatrixXd::Identity(q, q);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ();

    T.middleRows(start, p + q).rightCols(n - start) =
        Q.transpose() * T.middleRows(start, p + q).rightCols(n - start);
    T.middleCols(start, p + q).topRows(start + p + q) =
        T.middleCols(start, p + q).topRows(start + p + q) * Q;
    U.middleCols(start, p + q) = U.middleCols(start, p + q) * Q;

    // The swap leaves roundoff below the new leading block; zero it exactly.
    T.block(start + q, start, p, q).setZero();
}

}  // namespace

std::vector<Block> diagonal_blocks(const Eigen::MatrixXd& T) {
    std::vector<Block> blocks;
    const Eigen::Index n = T.rows();
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index size = 1;
        if (i + 1 < n && T(i + 1, i) != 0.0) size = 2;
        blocks.push_back({i, size, block_real_part(T, i, size)});
        i += size;
    }
    return blocks;
}

Eigen::Index order_stable_first(Eigen::MatrixXd& T, Eigen::MatrixXd& U) {
    const double pivot_floor = 1e-14 * std::max(1.0, T.norm());
    std::vector<Block> blocks = diagonal_blocks(T);

    // Bubble stable blocks to the front; each pass moves one unstable block
    // past the stable ones behind it.
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t b = 0; b + 1 < blocks.size(); ++b) {
            if (blocks[b].real_part >= 0.0 && blocks[b + 1].real_part < 0.0) {
                const Eigen::Index s = blocks[b].start;
                const Eigen::Index p = blocks[b].size;
                const Eigen::Index q = blocks[b + 1].size;
                swap_adjacent_blocks(T, U, s, p, q, pivot_floor);
                std::swap(blocks[b], blocks[b + 1]);
                blocks[b].start = s;
                blocks[b + 1].start = s + q;
                moved = true;
            }
        }
    }

    Eigen::Index stable = 0;
    for (const Block& blk : blocks) {
        if (blk.real_part < 0.0) stable += blk.size;
    }
    return stable;
}

void solve_lyap_quasi_triangular(const Eigen::MatrixXd& T, Eigen::MatrixXd& C,
                                 double pivot_floor) {
    const std::vector<Block> blocks = diagonal_blocks(T);
    const std::size_t nb = blocks.size();
    // T^T X + X T = C, forward substitution over block rows/columns.
    for (std::size_t i = 0; i < nb; ++i) {
        const Eigen::Index ri = blocks[i].start, pi = blocks[i].size;
        for (std::size_t j = 0; j < nb; ++j) {
            const Eigen::Index cj = blocks[j].start, qj = blocks[j].size;
            Eigen::MatrixXd rhs = C.block(ri, cj, pi, qj);
            if (ri > 0) rhs -= T.block(0, ri, ri, pi).transpose() * C.block(0, cj, ri, qj);
            if (cj > 0) rhs -= C.block(ri, 0, pi, cj) * T.block(0, cj, cj, qj);
            C.block(ri, cj, pi, qj) =
                solve_small_sylvester(T.block(ri, ri, pi, pi).transpose(),
                                      T.block(cj, cj, qj, qj), rhs, 1.0, pivot_floor);
        }
    }
}

Eigen::MatrixXd solve_sylvester_quasi_triangular(const Eigen::MatrixXd& T11,
                                                 const Eigen::MatrixXd& T22,
                                                 const Eigen::MatrixXd& C,
                                                 double pivot_floor) {
    const std::vector<Block> rb = diagonal_blocks(T11);
    const std::vector<Block> cb = diagonal_blocks(T22);
    const Eigen::Index k = T11.rows();
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(k, T22.rows());
    // T11 X - X T22 = C; rows bottom-up, columns left-to-right.
    for (std::size_t jb = 0; jb < cb.size(); ++jb) {
        const Eigen::Index cj = cb[jb].start, qj = cb[jb].size;
        for (std::size_t ib = rb.size(); ib-- > 0;) {
            const Eigen::Index ri = rb[ib].start, pi = rb[ib].size;
            Eigen::MatrixXd rhs = C.block(ri, cj, pi, qj);
            const Eigen::Index below = k - (ri + pi);
            if (below > 0)
                rhs -= T11.block(ri, ri + pi, pi, below) * X.block(ri + pi, cj, below, qj);
            if (cj > 0) rhs += X.block(ri, 0, pi, cj) * T22.block(0, cj, cj, qj);
            X.block(ri, cj, pi, qj) =
                solve_small_sylvester(T11.block(ri, ri, pi, pi), T22.block(cj, cj, qj, qj),
                                      rhs, -1.0, pivot_floor);
        }
    }
    return X;
}

}  // namespace schur
}  // namespace qbt
