#include "doctest.h"

#include <random>

#include "qbt/lti.hpp"
#include "test_helpers.hpp"

using namespace qbt;
using namespace qbt_test;

TEST_CASE("eval_tf on scalar lags") {
    CHECK(eval_tf(scalar_system(-1, 1, 1, 0), Complex(0, 0)).value().real() ==
          doctest::Approx(1.0));
    CHECK(eval_tf(s1(), Complex(0, 0)).value().real() == doctest::Approx(2.0));

    const CMatrix at_i = eval_tf(scalar_system(-1, 1, 1, 0), Complex(0, 1));
    CHECK(std::abs(at_i.value() - Complex(0.5, -0.5)) < 1e-15);
}

TEST_CASE("eval_tf refuses a pole") {
    CHECK_THROWS_AS(eval_tf(scalar_system(-1, 1, 1, 0), Complex(-1, 0)), SingularResolvent);
}

TEST_CASE("eval_tf of a pure gain") {
    Matrix D(1, 1);
    D << 2.0;
    const StateSpaceSystem gain{Matrix(0, 0), Matrix(0, 1), Matrix(1, 0), D};
    CHECK(eval_tf(gain, Complex(3, 1)).value().real() == doctest::Approx(2.0));
}

TEST_CASE("strictly_proper zeroes the feedthrough") {
    const StateSpaceSystem sp = strictly_proper(s1());
    CHECK(sp.D(0, 0) == 0.0);
    const Complex s(0.7, 0.3);
    CHECK(std::abs(eval_tf(s1(), s).value() - eval_tf(sp, s).value() - 1.0) < 1e-14);

    const StateSpaceSystem already = scalar_system(-1, 1, 1, 0);
    CHECK(strictly_proper(already).D == already.D);
}

TEST_CASE("dual sign and transpose rule") {
    const StateSpaceSystem d = dual(scalar_system(-1, 2, 3, 4));
    CHECK(d.A(0, 0) == 1.0);
    CHECK(d.B(0, 0) == -3.0);
    CHECK(d.C(0, 0) == 2.0);
    CHECK(d.D(0, 0) == 4.0);
}

TEST_CASE("dual evaluates to G(-s)^T") {
    std::mt19937_64 rng(11);
    const StateSpaceSystem sys = random_stable_system(rng, 6, 2, 3);
    const StateSpaceSystem dsys = dual(sys);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int t = 0; t < 10; ++t) {
        const Complex s(coord(rng), coord(rng));
        const CMatrix lhs = eval_tf(dsys, s);
        const CMatrix rhs = eval_tf(sys, -s).transpose();
        CHECK(max_abs(lhs - rhs) <= 1e-12 * (1.0 + max_abs(rhs)));
    }

    // involution up to state sign: same transfer values
    const StateSpaceSystem dd = dual(dual(sys));
    const Complex s(0.4, 1.3);
    CHECK(max_abs(eval_tf(dd, s) - eval_tf(sys, s)) < 1e-12);
}

TEST_CASE("inverse realizes G^{-1}") {
    const StateSpaceSystem inv = inverse(s1());
    for (const Complex s : {Complex(0, 0), Complex(0, 1), Complex(3, 0)}) {
        const Complex prod = eval_tf(inv, s).value() * eval_tf(s1(), s).value();
        CHECK(std::abs(prod - 1.0) < 1e-13);
    }

    Matrix D(1, 1);
    D << 2.0;
    const StateSpaceSystem gain{Matrix(0, 0), Matrix(0, 1), Matrix(1, 0), D};
    CHECK(inverse(gain).D(0, 0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(inverse(scalar_system(-1, 1, 1, 0)), SingularFeedthrough);
}

TEST_CASE("series multiplies transfer values") {
    const StateSpaceSystem lag1 = scalar_system(-1, 1, 1, 0);
    const StateSpaceSystem lag2 = scalar_system(-2, 1, 1, 0);
    CHECK(eval_tf(series(lag1, lag2), Complex(0, 0)).value().real() ==
          doctest::Approx(0.5));

    Matrix D(1, 1);
    D << 1.0;
    const StateSpaceSystem unity{Matrix(0, 0), Matrix(0, 1), Matrix(1, 0), D};
    const Complex s(0.3, 0.9);
    CHECK(std::abs(eval_tf(series(unity, s1()), s).value() - eval_tf(s1(), s).value()) <
          1e-14);

    std::mt19937_64 rng(7);
    const StateSpaceSystem g1 = random_stable_system(rng, 5, 2, 3);
    const StateSpaceSystem g2 = random_stable_system(rng, 4, 4, 2);
    const StateSpaceSystem cascade = series(g1, g2);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    for (int t = 0; t < 10; ++t) {
        const Complex z(coord(rng), coord(rng));
        const CMatrix want = eval_tf(g1, z) * eval_tf(g2, z);
        CHECK(rel_dev(eval_tf(cascade, z), want) <= 1e-12);
    }

    CHECK_THROWS_AS(series(g2, g1), DimensionMismatch);
}

TEST_CASE("stable_part splits a decoupled modal system") {
    Matrix A(2, 2), B(2, 1), C(1, 2), D(1, 1);
    A << -1, 0, 0, 2;
    B << 1, 1;
    C << 1, 1;
    D << 0;
    const StateSpaceSystem sys{A, B, C, D};
    const StateSpaceSystem stab = stable_part(sys);
    REQUIRE(stab.order() == 1);
    // 1/(s+1) at s = 0 and s = i
    CHECK(std::abs(eval_tf(stab, Complex(0, 0)).value() - 1.0) < 1e-12);
    CHECK(std::abs(eval_tf(stab, Complex(0, 1)).value() - Complex(0.5, -0.5)) < 1e-12);
}

TEST_CASE("stable_part of a stable system is the strictly proper part") {
    std::mt19937_64 rng(23);
    const StateSpaceSystem sys = random_stable_system(rng, 6, 2, 2);
    const StateSpaceSystem stab = stable_part(sys);
    const Complex s(0.2, 0.8);
    CHECK(max_abs(eval_tf(stab, s) - eval_tf(strictly_proper(sys), s)) < 1e-12);
}

TEST_CASE("stable_part rejects imaginary-axis eigenvalues") {
    Matrix A(2, 2), B(2, 1), C(1, 2), D(1, 1);
    A << 0, 1, -1, 0;  // eigenvalues +/- i
    B << 1, 0;
    C << 1, 0;
    D << 0;
    CHECK_THROWS_AS(stable_part(StateSpaceSystem{A, B, C, D}), ImaginaryAxisEigenvalue);
}

TEST_CASE("stable plus antistable reproduces the strictly proper values") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 3; ++trial) {
        Matrix A = random_matrix(rng, 7, 7) / std::sqrt(7.0);
        A.diagonal().array() += 0.1;  // push some eigenvalues right
        const StateSpaceSystem sys{A, random_matrix(rng, 7, 2), random_matrix(rng, 2, 7),
                                   Matrix::Zero(2, 2)};
        const StateSpaceSystem stab = stable_part(sys);
        const StateSpaceSystem anti = antistable_part(sys);
        CHECK(stab.order() + anti.order() == 7);
        std::uniform_real_distribution<double> coord(0.5, 2.0);
        for (int t = 0; t < 10; ++t) {
            const Complex s(coord(rng), coord(rng));  // right half-plane, off the spectrum
            const CMatrix want = eval_tf(sys, s);
            const CMatrix got = eval_tf(stab, s) + eval_tf(anti, s);
            CHECK(rel_dev(got, want) <= 1e-9);
        }
    }
}

TEST_CASE("hinf_norm closed forms") {
    CHECK(hinf_norm(scalar_system(-1, 1, 0.5, 0)) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(hinf_norm(s1()) == doctest::Approx(2.0).epsilon(1e-6));

    Matrix D(2, 2);
    D << 3, 0, 0, 1;
    const StateSpaceSystem gain{Matrix(0, 0), Matrix(0, 2), Matrix(2, 0), D};
    CHECK(hinf_norm(gain) == doctest::Approx(3.0));

    Matrix A(1, 1), B(1, 1), C(1, 1), Du(1, 1);
    A << 1;
    B << 1;
    C << 1;
    Du << 0;
    CHECK_THROWS_AS(hinf_norm(StateSpaceSystem{A, B, C, Du}), UnstableSystem);
}

TEST_CASE("hinf_norm is similarity invariant") {
    std::mt19937_64 rng(41);
    const StateSpaceSystem sys = random_stable_system(rng, 6, 2, 2);
    const double rel_tol = 1e-6;
    const double norm = hinf_norm(sys, rel_tol);

    Matrix T = random_matrix(rng, 6, 6);
    T += 6.0 * Matrix::Identity(6, 6);  // well conditioned
    const Matrix Tinv = T.inverse();
    const StateSpaceSystem transformed{T * sys.A * Tinv, T * sys.B, sys.C * Tinv, sys.D};
    const double norm_t = hinf_norm(transformed, rel_tol);
    CHECK(std::abs(norm - norm_t) <= 10 * rel_tol * norm);
}

TEST_CASE("conjugate symmetry of real systems") {
    std::mt19937_64 rng(53);
    const StateSpaceSystem sys = random_stable_system(rng, 5, 2, 2);
    for (double w : {0.0, 0.3, 1.0, 8.5, 120.0}) {
        const CMatrix plus = eval_tf(sys, Complex(0, w));
        const CMatrix minus = eval_tf(sys, Complex(0, -w));
        CHECK(max_abs(minus - plus.conjugate()) <= 1e-13 * (1.0 + max_abs(plus)));
    }
}

TEST_CASE("resolvent product identity") {
    std::mt19937_64 rng(61);
    const StateSpaceSystem sys = random_stable_system(rng, 5, 1, 1);
    const Matrix& A = sys.A;
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int t = 0; t < 5; ++t) {
        const Complex s(coord(rng), coord(rng));
        const Complex z(coord(rng), coord(rng));
        if (std::abs(s - z) < 0.1) continue;
        CMatrix Ms = (-A).cast<Complex>();
        Ms.diagonal().array() += s;
        CMatrix Mz = (-A).cast<Complex>();
        Mz.diagonal().array() += z;
        const CMatrix Rs = Ms.inverse();
        const CMatrix Rz = Mz.inverse();
        const CMatrix lhs = Rs * Rz;
        const CMatrix rhs = (Rz - Rs) / (s - z);
        CHECK(rel_dev(lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("FrequencyEvaluator matches eval_tf") {
    std::mt19937_64 rng(71);
    const StateSpaceSystem sys = random_stable_system(rng, 9, 2, 3);
    const FrequencyEvaluator eval(sys);
    for (double w : {0.0, 0.1, 1.0, 30.0}) {
        const Complex s(0.0, w);
        CHECK(rel_dev(eval(s), eval_tf(sys, s)) <= 1e-12);
    }
}

TEST_CASE("constructor validates dimensions") {
    CHECK_THROWS_AS(StateSpaceSystem(Matrix::Zero(2, 3), Matrix::Zero(2, 1),
                                     Matrix::Zero(1, 2), Matrix::Zero(1, 1)),
                    DimensionMismatch);
    CHECK_THROWS_AS(StateSpaceSystem(Matrix::Zero(2, 2), Matrix::Zero(1, 1),
                                     Matrix::Zero(1, 2), Matrix::Zero(1, 1)),
                    DimensionMismatch);
}
