#ifndef QBT_EXPERIMENT_HPP
#define QBT_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "qbt/intrusive.hpp"
#include "qbt/io.hpp"
#include "qbt/models.hpp"

namespace qbt {

/// Batch study configuration: one model, a set of balancing variants, a
/// quadrature band with node counts, and the reduction orders to sweep.
struct ExperimentConfig {
    std::optional<ModelSpec> model_spec;  // exactly one of spec / path
    std::string model_path;
    std::vector<Variant> variants{Variant::lyapunov, Variant::bst, Variant::prbt,
                                  Variant::brbt};
    double omega_min = 1e-1;
    double omega_max = 1e4;
    std::vector<int> N_list{40, 80, 160};
    std::vector<int> orders{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    std::optional<double> normalization = 0.5;  // applied before brbt
    std::string output_dir = ".";
    double hinf_rel_tol = 1e-6;

    void validate() const;
};

ExperimentConfig load_config(const std::string& path);

// Relative H-infinity error ||G - G_r||_inf / ||G||_inf through the
// parallel difference realization.
double compare_models(const StateSpaceSystem& sys, const StateSpaceSystem& rom,
                      double rel_tol = 1e-6);

/// Runs the sweep and writes, per variant, singular_values_<variant>.csv
/// (true vs data-driven singular values for every N) and
/// errors_<variant>.csv (relative H-infinity error per order for the
/// intrusive and quadrature reduced models), plus manifest.json echoing the
/// resolved configuration. Failed (variant, N, r) cells degrade to NaN with
/// a reason instead of aborting the sweep. Returns the written paths.
std::vector<std::string> run(const ExperimentConfig& config);

}  // namespace qbt

#endif  // QBT_EXPERIMENT_HPP
