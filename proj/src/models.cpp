#include "qbt/models.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace qbt {

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "passive_ladder") return ModelKind::passive_ladder;
    if (name == "random_passive") return ModelKind::random_passive;
    if (name == "random_stable") return ModelKind::random_stable;
    throw InvalidSpec("unknown model kind '" + name + "'");
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::passive_ladder: return "passive_ladder";
        case ModelKind::random_passive: return "random_passive";
        case ModelKind::random_stable: return "random_stable";
    }
    return "unknown";
}

namespace {

// Hand-rolled Box-Muller on top of mt19937_64 keeps generated models
// bit-identical across standard libraries.
class Gaussian {
  public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
        Matrix M(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = (*this)();
        return M;
    }

  private:
    double uniform() {
        // in (0, 1]; never 0 so the log is finite
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
    }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

StateSpaceSystem make_ladder(const ModelSpec& spec) {
    if (!(spec.R > 0.0 && spec.L > 0.0 && spec.C > 0.0 && spec.Rbar > 0.0))
        throw InvalidSpec("ladder parameters must be positive");
    const Eigen::Index n = spec.n;

    // States alternate capacitor charges and inductor fluxes along the
    // chain: q_1, phi_1, q_2, phi_2, ...; inductor k joins node k to node
    // k+1 (or to ground when it is the final component). Port resistor and
    // terminal load are both Rbar, every inductor branch carries the series
    // resistance R.
    const Eigen::Index n_cap = (n + 1) / 2;
    Matrix J = Matrix::Zero(n, n);
    Matrix Rh = Matrix::Zero(n, n);
    Matrix Qh = Matrix::Zero(n, n);

    auto cap_index = [](Eigen::Index k) { return 2 * k; };      // k-th capacitor
    auto ind_index = [](Eigen::Index k) { return 2 * k + 1; };  // k-th inductor

    for (Eigen::Index i = 0; i < n; ++i)
        Qh(i, i) = (i % 2 == 0) ? 1.0 / spec.C : 1.0 / spec.L;

    const Eigen::Index n_ind = n / 2;
    for (Eigen::Index k = 0; k < n_ind; ++k) {
        const Eigen::Index phi = ind_index(k);
        const Eigen::Index from = cap_index(k);
        J(from, phi) = -1.0;  // current leaves node k
        J(phi, from) = 1.0;
        if (k + 1 < n_cap) {
            const Eigen::Index to = cap_index(k + 1);
            J(to, phi) = 1.0;  // and enters node k+1
            J(phi, to) = -1.0;
        }
        Rh(phi, phi) = spec.R;
    }
    Rh(cap_index(0), cap_index(0)) += 1.0 / spec.Rbar;
    Rh(cap_index(n_cap - 1), cap_index(n_cap - 1)) += 1.0 / spec.Rbar;

    Matrix B = Matrix::Zero(n, 1);
    B(0, 0) = 1.0 / spec.Rbar;
    Matrix D(1, 1);
    D(0, 0) = 1.0 / spec.Rbar;

    return {(J - Rh) * Qh, B, (B.transpose() * Qh).eval(), D};
}

StateSpaceSystem make_random_passive(const ModelSpec& spec) {
    Gaussian g(spec.seed);
    const Eigen::Index n = spec.n, m = spec.m;
    const Matrix G0 = g.matrix(n, n);
    const Matrix J = 0.5 * (G0 - G0.transpose());
    const Matrix W1 = g.matrix(n, n);
    const Matrix Rh =
        (W1 * W1.transpose() / static_cast<double>(n) + 0.1 * Matrix::Identity(n, n)).eval();
    const Matrix W2 = g.matrix(n, n);
    const Matrix Qh =
        (W2 * W2.transpose() / static_cast<double>(n) + 0.1 * Matrix::Identity(n, n)).eval();
    const Matrix B = g.matrix(n, m);
    Matrix N = g.matrix(m, m);
    // D = 0.5 I plus a contraction keeps D + D^T SPD and D nonsingular.
    const Matrix D = 0.5 * Matrix::Identity(m, m) + 0.2 * N / std::max(1.0, N.norm());
    return {(J - Rh) * Qh, B, (B.transpose() * Qh).eval(), D};
}

StateSpaceSystem make_random_stable(const ModelSpec& spec) {
    Gaussian g(spec.seed);
    const Eigen::Index n = spec.n;
    Matrix A = g.matrix(n, n) / std::sqrt(static_cast<double>(n));
    const double abscissa = Eigen::EigenSolver<Matrix>(A, false).eigenvalues().real().maxCoeff();
    A.diagonal().array() -= abscissa + 0.5;
    return {A, g.matrix(n, spec.m), g.matrix(spec.p, n), Matrix::Zero(spec.p, spec.m)};
}

}  // namespace

StateSpaceSystem generate(const ModelSpec& spec) {
    if (spec.n < 1) throw InvalidSpec("model order must be at least 1");
    if (spec.m < 1 || spec.p < 1) throw InvalidSpec("port dimensions must be at least 1");
    switch (spec.kind) {
        case ModelKind::passive_ladder: return make_ladder(spec);
        case ModelKind::random_passive: return make_random_passive(spec);
        case ModelKind::random_stable: return make_random_stable(spec);
    }
    throw InvalidSpec("unknown model kind");
}

StateSpaceSystem normalize_hinf(const StateSpaceSystem& sys, double gamma_target,
                                double rel_tol) {
    if (!(gamma_target > 0.0)) throw InvalidRange("gamma_target must be positive");
    if (!sys.is_stable()) throw UnstableSystem("normalize_hinf requires a stable system");
    const double scale = gamma_target / hinf_norm(sys, rel_tol);
    return {sys.A, sys.B, (scale * sys.C).eval(), (scale * sys.D).eval()};
}

}  // namespace qbt
