#ifndef QBT_MODELS_HPP
#define QBT_MODELS_HPP

#include <cstdint>
#include <string>

#include "qbt/lti.hpp"

namespace qbt {

enum class ModelKind { passive_ladder, random_passive, random_stable };

ModelKind model_kind_from_string(const std::string& name);
std::string to_string(ModelKind kind);

/// Seeded benchmark-model description. The ladder parameters follow the
/// usual RLC chain reading: series resistance R and inductance L per
/// section, shunt capacitance C per node, terminal resistance Rbar at the
/// port and the far end. m (and p, for random_stable) size the port
/// dimensions of the random kinds.
struct ModelSpec {
    ModelKind kind = ModelKind::passive_ladder;
    Eigen::Index n = 1;
    std::uint64_t seed = 0;
    double R = 0.1;
    double L = 0.1;
    double C = 0.1;
    double Rbar = 1.0;
    Eigen::Index m = 1;
    Eigen::Index p = 1;
};

/// Deterministic generator. The passive kinds are built in port-Hamiltonian
/// form A = (J - R_h) Q_h, C = B^T Q_h with skew J, PSD R_h, SPD Q_h and
/// D + D^T SPD, which makes them strictly positive real by construction:
/// the Popov function satisfies Phi(iw) >= D + D^T uniformly.
StateSpaceSystem generate(const ModelSpec& spec);

// Scales C and D by gamma_target / ||G||_inf so the resulting H-infinity
// norm is gamma_target (within the norm estimator's tolerance).
StateSpaceSystem normalize_hinf(const StateSpaceSystem& sys, double gamma_target,
                                double rel_tol = 1e-6);

}  // namespace qbt

#endif  // QBT_MODELS_HPP
