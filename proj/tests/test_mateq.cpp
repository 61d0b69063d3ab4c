#include "doctest.h"

#include <cmath>
#include <random>

#include "qbt/mateq.hpp"
#include "test_helpers.hpp"

using namespace qbt;
using namespace qbt_test;

namespace {

double lyap_residual_scale(const Matrix& A, const Matrix& X, const Matrix& RHS) {
    return A.norm() * X.norm() + RHS.norm();
}

// Reference port-Hamiltonian passive system for ARE residual tests; kept
// local so this suite does not depend on the model generators it helps to
// validate.
StateSpaceSystem passive_system(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
    const Matrix G0 = random_matrix(rng, n, n);
    const Matrix J = 0.5 * (G0 - G0.transpose());
    const Matrix W1 = random_matrix(rng, n, n);
    const Matrix Rh = W1 * W1.transpose() / double(n) + 0.2 * Matrix::Identity(n, n);
    const Matrix W2 = random_matrix(rng, n, n);
    const Matrix Qh = W2 * W2.transpose() / double(n) + 0.2 * Matrix::Identity(n, n);
    const Matrix B = random_matrix(rng, n, m);
    Matrix N = random_matrix(rng, m, m);
    const Matrix D = 0.5 * Matrix::Identity(m, m) + 0.2 * N / std::max(1.0, N.norm());
    return {(J - Rh) * Qh, B, (B.transpose() * Qh).eval(), D};
}

}  // namespace

TEST_CASE("solve_lyapunov scalar and 2x2 closed forms") {
    Matrix a(1, 1), rhs(1, 1);
    a << -1;
    rhs << 1;
    const GramianSolution sol = solve_lyapunov(a, rhs);
    CHECK(sol.X(0, 0) == doctest::Approx(0.5));
    CHECK(sol.closed_loop_abscissa == doctest::Approx(-1.0));

    Matrix A2 = -Matrix::Identity(2, 2);
    Matrix R2(2, 2);
    R2 << 1, 1, 1, 1;
    const GramianSolution sol2 = solve_lyapunov(A2, R2);
    CHECK((sol2.X - 0.5 * R2).norm() < 1e-14);
}

TEST_CASE("solve_lyapunov residual on random stable systems") {
    std::mt19937_64 rng(5);
    const StateSpaceSystem sys = random_stable_system(rng, 8, 2, 2);
    const Matrix RHS = sys.C.transpose() * sys.C;
    const GramianSolution sol = solve_lyapunov(sys.A, RHS);
    CHECK(sol.residual_norm <= 1e-9 * lyap_residual_scale(sys.A, sol.X, RHS));
    CHECK((sol.X - sol.X.transpose()).norm() <= 1e-12 * sol.X.norm());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sol.X);
    CHECK(es.eigenvalues().minCoeff() > -1e-10 * sol.X.norm());

    const GramianSolution factored = solve_lyapunov_factored(sys.A, sys.C.transpose());
    CHECK((factored.X - sol.X).norm() <= 1e-12 * sol.X.norm());
}

TEST_CASE("solve_lyapunov rejects unstable A") {
    Matrix a(1, 1), rhs(1, 1);
    a << 1;
    rhs << 1;
    CHECK_THROWS_AS(solve_lyapunov(a, rhs), UnstableA);
}

TEST_CASE("Gramians transform congruently under state similarity") {
    std::mt19937_64 rng(17);
    const StateSpaceSystem sys = random_stable_system(rng, 6, 2, 2);
    Matrix T = random_matrix(rng, 6, 6) + 6.0 * Matrix::Identity(6, 6);
    const Matrix Tinv = T.inverse();
    const StateSpaceSystem tr{T * sys.A * Tinv, T * sys.B, sys.C * Tinv, sys.D};

    const Matrix P = solve_lyapunov(sys.A.transpose(), sys.B * sys.B.transpose()).X;
    const Matrix Pt = solve_lyapunov(tr.A.transpose(), tr.B * tr.B.transpose()).X;
    CHECK((Pt - T * P * T.transpose()).norm() <= 1e-9 * Pt.norm());

    const Matrix Q = solve_lyapunov(sys.A, sys.C.transpose() * sys.C).X;
    const Matrix Qt = solve_lyapunov(tr.A, tr.C.transpose() * tr.C).X;
    CHECK((Qt - Tinv.transpose() * Q * Tinv).norm() <= 1e-9 * Qt.norm());
}

TEST_CASE("solve_are_stabilizing zero-data sanity") {
    std::mt19937_64 rng(29);
    const StateSpaceSystem sys = random_stable_system(rng, 5, 2, 2);
    const Matrix R = Matrix::Identity(2, 2);
    const GramianSolution sol =
        solve_are_stabilizing(sys.A, sys.B, Matrix::Zero(5, 2), R, Matrix::Zero(5, 5),
                              GramianKind::lyapunov_Q);
    CHECK(sol.X.norm() <= 1e-10);
    CHECK(sol.closed_loop_abscissa < 0.0);
}

TEST_CASE("BST ARE scalar closed form picks the minimal branch") {
    Matrix P(1, 1);
    P << 0.5;
    const GramianSolution QW = solve_bst_are(s1(), P);
    // roots of 2.25 Q^2 - 5 Q + 1 are {2/9, 2}; minimum phase branch is 2/9
    CHECK(std::abs(QW.X(0, 0) - 2.0 / 9.0) <= 1e-12);
    CHECK(QW.closed_loop_abscissa == doctest::Approx(-2.0));

    // wrong branch Q = 2 would put the closed-loop eigenvalue at +2
    const double wrong = -2.5 + 2.25 * 2.0;
    CHECK(wrong == doctest::Approx(2.0));
}

TEST_CASE("BST ARE input guards") {
    Matrix P(1, 1);
    P << 0.5;
    CHECK_THROWS_AS(solve_bst_are(s2(), P), SingularD);  // D = 0

    std::mt19937_64 rng(31);
    const StateSpaceSystem wide = random_stable_system(rng, 3, 2, 1);
    CHECK_THROWS_AS(solve_bst_are(wide, Matrix::Identity(3, 3)), NonSquareSystem);
}

TEST_CASE("BST ARE residual on a random passive system") {
    std::mt19937_64 rng(37);
    const StateSpaceSystem sys = passive_system(rng, 10, 2);
    const Matrix P = solve_lyapunov(sys.A.transpose(), sys.B * sys.B.transpose()).X;
    const GramianSolution QW = solve_bst_are(sys, P);

    const Matrix Bw = P * sys.C.transpose() + sys.B * sys.D.transpose();
    const Matrix F = sys.C - Bw.transpose() * QW.X;
    const Matrix R = sys.D * sys.D.transpose();
    const Matrix residual = sys.A.transpose() * QW.X + QW.X * sys.A +
                            F.transpose() * R.inverse() * F;
    CHECK(residual.norm() <= 1e-10 * (1.0 + sys.A.norm() * QW.X.norm()));
    CHECK(QW.closed_loop_abscissa < 0.0);
}

TEST_CASE("PR AREs scalar closed form") {
    const auto [QM, PN] = solve_pr_ares(s1());
    const double want = 3.0 - 2.0 * std::sqrt(2.0);
    CHECK(std::abs(QM.X(0, 0) - want) <= 1e-12);
    CHECK(std::abs(PN.X(0, 0) - want) <= 1e-12);  // b = c symmetry
    CHECK(QM.closed_loop_abscissa < 0.0);
    CHECK(PN.closed_loop_abscissa < 0.0);
    // minimal root is the smaller quadratic root
    CHECK(QM.X(0, 0) < 3.0 + 2.0 * std::sqrt(2.0));
}

TEST_CASE("PR AREs residuals on a random passive system") {
    std::mt19937_64 rng(41);
    const StateSpaceSystem sys = passive_system(rng, 12, 2);
    const auto [QM, PN] = solve_pr_ares(sys);
    const Matrix R = sys.D + sys.D.transpose();

    const Matrix FM = sys.C - sys.B.transpose() * QM.X;
    const Matrix resM = sys.A.transpose() * QM.X + QM.X * sys.A +
                        FM.transpose() * R.inverse() * FM;
    CHECK(resM.norm() <= 1e-9 * (1.0 + sys.A.norm() * QM.X.norm()));

    const Matrix FN = sys.B - PN.X * sys.C.transpose();
    const Matrix resN = sys.A * PN.X + PN.X * sys.A.transpose() +
                        FN * R.inverse() * FN.transpose();
    CHECK(resN.norm() <= 1e-9 * (1.0 + sys.A.norm() * PN.X.norm()));

    Eigen::SelfAdjointEigenSolver<Matrix> esQ(QM.X), esP(PN.X);
    CHECK(esQ.eigenvalues().minCoeff() > 0.0);
    CHECK(esP.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("PR AREs reject a non-passive system") {
    CHECK_THROWS_AS(solve_pr_ares(s2()), NotPositiveReal);  // D + D^T = 0
}

TEST_CASE("BR AREs scalar closed forms") {
    const auto [QJ, PK] = solve_br_ares(s2());
    CHECK(std::abs(QJ.X(0, 0) - (1.0 - std::sqrt(3.0) / 2.0)) <= 1e-12);
    CHECK(std::abs(PK.X(0, 0) - (4.0 - 2.0 * std::sqrt(3.0))) <= 1e-12);
    CHECK(QJ.closed_loop_abscissa < 0.0);
    CHECK(PK.closed_loop_abscissa < 0.0);
    // minimal roots are the smaller quadratic roots
    CHECK(QJ.X(0, 0) < 1.0 + std::sqrt(3.0) / 2.0);
    CHECK(PK.X(0, 0) < 4.0 + 2.0 * std::sqrt(3.0));

    // bounded-real factor identity at s = 0: J(0)^2 = 1 - G(0)^2
    const double J0 = 1.0 - QJ.X(0, 0);
    CHECK(J0 * J0 == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("BR AREs reject a non-contractive system") {
    CHECK_THROWS_AS(solve_br_ares(s1()), NotBoundedReal);  // ||G||_inf = 2
}

TEST_CASE("branch ordering spot-check via scalar instances") {
    // Returned roots must be the smaller of each quadratic pair.
    Matrix P(1, 1);
    P << 0.5;
    CHECK(solve_bst_are(s1(), P).X(0, 0) < 1.0);
    CHECK(solve_pr_ares(s1()).first.X(0, 0) < 1.0);
    CHECK(solve_br_ares(s2()).first.X(0, 0) < 1.0);
}
