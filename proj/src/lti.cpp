#include "qbt/lti.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qbt/schur.hpp"

namespace qbt {

StateSpaceSystem::StateSpaceSystem(Matrix A_, Matrix B_, Matrix C_, Matrix D_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), D(std::move(D_)) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw DimensionMismatch("A must be square");
    if (B.rows() != n) throw DimensionMismatch("B must have n rows");
    if (C.cols() != n) throw DimensionMismatch("C must have n columns");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw DimensionMismatch("D must be p x m");
    if (!A.allFinite() || !B.allFinite() || !C.allFinite() || !D.allFinite())
        throw InvalidInput("state-space matrices must be finite");
}

double StateSpaceSystem::spectral_abscissa() const {
    if (order() == 0) return -std::numeric_limits<double>::infinity();
    Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff();
}

CMatrix eval_tf(const StateSpaceSystem& sys, Complex s) {
    if (sys.order() == 0) return sys.D.cast<Complex>();
    CMatrix M = (-sys.A).cast<Complex>();
    M.diagonal().array() += s;
    Eigen::PartialPivLU<CMatrix> lu(M);
    if (lu.rcond() < 1e-14) throw SingularResolvent("s is numerically a pole of the system");
    return sys.C.cast<Complex>() * lu.solve(sys.B.cast<Complex>()) + sys.D.cast<Complex>();
}

StateSpaceSystem strictly_proper(const StateSpaceSystem& sys) {
    return {sys.A, sys.B, sys.C, Matrix::Zero(sys.D.rows(), sys.D.cols())};
}

StateSpaceSystem dual(const StateSpaceSystem& sys) {
    return {-sys.A.transpose(), -sys.C.transpose(), sys.B.transpose(), sys.D.transpose()};
}

StateSpaceSystem inverse(const StateSpaceSystem& sys) {
    if (sys.D.rows() != sys.D.cols()) throw DimensionMismatch("feedthrough must be square");
    if (sys.D.rows() == 0) throw DimensionMismatch("cannot invert an empty feedthrough");
    Eigen::PartialPivLU<Matrix> lu(sys.D);
    if (lu.rcond() < 1e-14)
        throw SingularFeedthrough("feedthrough is singular to working precision");
    const Matrix Dinv = lu.solve(Matrix::Identity(sys.D.rows(), sys.D.cols()));
    const Matrix DinvC = lu.solve(sys.C);
    const Matrix BDinv = sys.B * Dinv;
    return {sys.A - BDinv * sys.C, BDinv, -DinvC, Dinv};
}

StateSpaceSystem series(const StateSpaceSystem& sys1, const StateSpaceSystem& sys2) {
    if (sys1.num_inputs() != sys2.num_outputs())
        throw DimensionMismatch("series: output dimension of sys2 must equal input dimension of sys1");
    const Eigen::Index n1 = sys1.order(), n2 = sys2.order();
    Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = sys1.A;
    A.topRightCorner(n1, n2) = sys1.B * sys2.C;
    A.bottomRightCorner(n2, n2) = sys2.A;
    Matrix B(n1 + n2, sys2.num_inputs());
    B.topRows(n1) = sys1.B * sys2.D;
    B.bottomRows(n2) = sys2.B;
    Matrix C(sys1.num_outputs(), n1 + n2);
    C.leftCols(n1) = sys1.C;
    C.rightCols(n2) = sys1.D * sys2.C;
    return {A, B, C, sys1.D * sys2.D};
}

namespace {

struct SpectralSplit {
    StateSpaceSystem stable;
    StateSpaceSystem antistable;
};

SpectralSplit split_spectrum(const StateSpaceSystem& sys) {
    const Eigen::Index n = sys.order();
    const Eigen::Index m = sys.num_inputs(), p = sys.num_outputs();
    const Matrix Dz = Matrix::Zero(p, m);
    if (n == 0) {
        StateSpaceSystem empty{Matrix(0, 0), Matrix(0, m), Matrix(p, 0), Dz};
        return {empty, empty};
    }

    Eigen::RealSchur<Matrix> rs(sys.A);
    Matrix T = rs.matrixT();
    Matrix U = rs.matrixU();

    const double gap_tol = 1e-8 * sys.A.norm();
    for (const schur::Block& blk : schur::diagonal_blocks(T)) {
        if (std::abs(blk.real_part) <= gap_tol)
            throw ImaginaryAxisEigenvalue("eigenvalue within " + std::to_string(gap_tol) +
                                          " of the imaginary axis");
    }

    const Eigen::Index k = schur::order_stable_first(T, U);
    const Matrix Bh = U.transpose() * sys.B;
    const Matrix Ch = sys.C * U;
    if (k == n) return {StateSpaceSystem{sys.A, sys.B, sys.C, Dz},
                        StateSpaceSystem{Matrix(0, 0), Matrix(0, m), Matrix(p, 0), Dz}};
    if (k == 0) return {StateSpaceSystem{Matrix(0, 0), Matrix(0, m), Matrix(p, 0), Dz},
                        StateSpaceSystem{sys.A, sys.B, sys.C, Dz}};

    // Decouple: with X solving T11 X - X T22 = -T12 the transformed
    // realization is block diagonal.
    const double pivot_floor = 1e-14 * std::max(1.0, sys.A.norm());
    const Matrix X = schur::solve_sylvester_quasi_triangular(
        T.topLeftCorner(k, k), T.bottomRightCorner(n - k, n - k),
        -T.topRightCorner(k, n - k), pivot_floor);

    StateSpaceSystem stable{T.topLeftCorner(k, k),
                            Bh.topRows(k) - X * Bh.bottomRows(n - k), Ch.leftCols(k), Dz};
    StateSpaceSystem anti{T.bottomRightCorner(n - k, n - k), Bh.bottomRows(n - k),
                          Ch.leftCols(k) * X + Ch.rightCols(n - k), Dz};
    return {std::move(stable), std::move(anti)};
}

}  // namespace

StateSpaceSystem stable_part(const StateSpaceSystem& sys) {
    return split_spectrum(sys).stable;
}

StateSpaceSystem antistable_part(const StateSpaceSystem& sys) {
    return split_spectrum(sys).antistable;
}

struct FrequencyEvaluator::Shared {
    Matrix H;    // upper Hessenberg, orthogonally similar to A
    Matrix CQ;   // C * Q
    Matrix QtB;  // Q^T * B
    Matrix D;
};

FrequencyEvaluator::FrequencyEvaluator(const StateSpaceSystem& sys) {
    auto shared = std::make_shared<Shared>();
    const Eigen::Index n = sys.order();
    if (n == 0) {
        shared->H = Matrix(0, 0);
        shared->CQ = sys.C;
        shared->QtB = sys.B;
    } else {
        Eigen::HessenbergDecomposition<Matrix> hd(sys.A);
        const Matrix Q = hd.matrixQ();
        shared->H = hd.matrixH();
        shared->CQ = sys.C * Q;
        shared->QtB = Q.transpose() * sys.B;
    }
    shared->D = sys.D;
    shared_ = std::move(shared);
}

Eigen::Index FrequencyEvaluator::rows() const { return shared_->D.rows(); }
Eigen::Index FrequencyEvaluator::cols() const { return shared_->D.cols(); }

CMatrix FrequencyEvaluator::operator()(Complex s) const {
    const Shared& sh = *shared_;
    const Eigen::Index n = sh.H.rows();
    if (n == 0) return sh.D.cast<Complex>();

    // Gaussian elimination on the upper Hessenberg sI - H with adjacent-row
    // pivoting, then back substitution.
    CMatrix W = (-sh.H).cast<Complex>();
    W.diagonal().array() += s;
    CMatrix R = sh.QtB.cast<Complex>();
    const double scale = sh.H.norm() + std::abs(s) + 1.0;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (std::abs(W(k + 1, k)) > std::abs(W(k, k))) {
            W.row(k).tail(n - k).swap(W.row(k + 1).tail(n - k));
            R.row(k).swap(R.row(k + 1));
        }
        if (std::abs(W(k, k)) <= 1e-300) throw SingularResolvent("resolvent pivot underflow");
        const Complex l = W(k + 1, k) / W(k, k);
        W(k + 1, k) = 0.0;
        W.row(k + 1).tail(n - k - 1) -= l * W.row(k).tail(n - k - 1);
        R.row(k + 1) -= l * R.row(k);
    }
    for (Eigen::Index i = n; i-- > 0;) {
        if (std::abs(W(i, i)) <= 1e-14 * scale)
            throw SingularResolvent("s is numerically a pole of the system");
        if (i + 1 < n) R.row(i) -= W.row(i).tail(n - i - 1) * R.bottomRows(n - i - 1);
        R.row(i) /= W(i, i);
    }
    return sh.CQ.cast<Complex>() * R + sh.D.cast<Complex>();
}

namespace {

double sigma_max(const CMatrix& M) {
    if (M.size() == 0) return 0.0;
    return Eigen::JacobiSVD<CMatrix>(M).singularValues()(0);
}

// Golden-section maximization of f over [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi, double width_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    double best = std::max(f1, f2);
    while (hi - lo > width_tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

}  // namespace

double hinf_norm(const StateSpaceSystem& sys, double rel_tol) {
    if (sys.order() == 0) return sigma_max(sys.D.cast<Complex>());
    if (!sys.is_stable()) throw UnstableSystem("hinf_norm requires a stable system");

    const FrequencyEvaluator eval(sys);
    const auto gain = [&](double w) { return sigma_max(eval(Complex(0.0, w))); };

    constexpr double lg_lo = -6.0, lg_hi = 8.0;
    constexpr int per_decade = 30;
    const int npts = static_cast<int>((lg_hi - lg_lo) * per_decade) + 1;
    std::vector<double> lg(npts);
    std::vector<double> val(npts);
    for (int i = 0; i < npts; ++i) {
        lg[i] = lg_lo + (lg_hi - lg_lo) * i / (npts - 1);
        val[i] = gain(std::pow(10.0, lg[i]));
    }
    const double at_zero = gain(0.0);
    const double at_inf = sigma_max(sys.D.cast<Complex>());

    int best_i = 0;
    for (int i = 1; i < npts; ++i)
        if (val[i] > val[best_i]) best_i = i;

    double best = std::max({val[best_i], at_zero, at_inf});
    const double width_tol = std::max(rel_tol, 1e-12);
    if (at_zero >= val[best_i]) {
        // Peak at or near w = 0; refine on a linear bracket.
        best = std::max(best, golden_max(gain, 0.0, std::pow(10.0, lg[0]),
                                         width_tol * std::pow(10.0, lg[0])));
    }
    const int ilo = std::max(0, best_i - 1);
    const int ihi = std::min(npts - 1, best_i + 1);
    best = std::max(best, golden_max([&](double t) { return gain(std::pow(10.0, t)); },
                                     lg[ilo], lg[ihi], width_tol));
    return best;
}

}  // namespace qbt
