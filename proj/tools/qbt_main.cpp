// Command-line front end: model generation, oracle sampling, reduction,
// H-infinity norms, and the batch experiment runner.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qbt/experiment.hpp"

namespace {

qbt::StateSpaceSystem load_and_maybe_normalize(const std::string& path, double normalize,
                                               double rel_tol) {
    qbt::StateSpaceSystem sys = qbt::load_model(path);
    if (normalize > 0.0) sys = qbt::normalize_hinf(sys, normalize, rel_tol);
    return sys;
}

qbt::Matrix parse_feedthrough(const std::string& text, Eigen::Index p, Eigen::Index m) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array() || j.size() != static_cast<std::size_t>(p * m))
        throw qbt::InvalidInput("feedthrough must be a JSON array of p*m numbers");
    qbt::Matrix D(p, m);
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index jc = 0; jc < m; ++jc) D(i, jc) = j[at++].get<double>();
    return D;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Balanced truncation family with quadrature-based data-driven variants"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a benchmark model as model JSON");
    std::string gen_kind = "passive_ladder";
    qbt::ModelSpec spec;
    std::string gen_out = "model.json";
    gen->add_option("--kind", gen_kind, "passive_ladder | random_passive | random_stable");
    gen->add_option("--n", spec.n, "model order")->required();
    gen->add_option("--seed", spec.seed, "random seed");
    gen->add_option("--R", spec.R, "ladder series resistance");
    gen->add_option("--L", spec.L, "ladder inductance");
    gen->add_option("--C", spec.C, "ladder capacitance");
    gen->add_option("--Rbar", spec.Rbar, "ladder terminal resistance");
    gen->add_option("--m", spec.m, "input count (random kinds)");
    gen->add_option("--p", spec.p, "output count (random_stable)");
    gen->add_option("-o,--output", gen_out, "output path");

    // sample
    auto* sample = app.add_subcommand("sample", "Sample variant oracles into a dataset JSON");
    std::string sample_model, sample_variant = "lyapunov", sample_out = "dataset.json";
    double sample_wmin = 1e-1, sample_wmax = 1e4, sample_normalize = 0.0;
    int sample_N = 40;
    sample->add_option("--model", sample_model, "model JSON path")->required();
    sample->add_option("--variant", sample_variant, "lyapunov | bst | prbt | brbt");
    sample->add_option("--omega-min", sample_wmin, "band lower edge");
    sample->add_option("--omega-max", sample_wmax, "band upper edge");
    sample->add_option("-N,--nodes", sample_N, "nodes per rule (even, >= 4)");
    sample->add_option("--normalize", sample_normalize,
                       "rescale to this H-infinity norm first (needed for brbt)");
    sample->add_option("-o,--output", sample_out, "output path");

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "Reduce from a dataset or a model");
    std::string red_dataset, red_model, red_variant = "lyapunov", red_out = "rom.json";
    std::string red_method = "quad", red_feedthrough;
    double red_wmin = 1e-1, red_wmax = 1e4, red_normalize = 0.0;
    int red_r = 0, red_N = 40;
    reduce_cmd->add_option("--dataset", red_dataset, "dataset JSON path");
    reduce_cmd->add_option("--model", red_model, "model JSON path");
    reduce_cmd->add_option("--variant", red_variant, "variant (model mode)");
    reduce_cmd->add_option("-r,--order", red_r, "reduction order")->required();
    reduce_cmd->add_option("-N,--nodes", red_N, "nodes per rule (model mode)");
    reduce_cmd->add_option("--omega-min", red_wmin, "band lower edge (model mode)");
    reduce_cmd->add_option("--omega-max", red_wmax, "band upper edge (model mode)");
    reduce_cmd->add_option("--method", red_method, "quad | intrusive (model mode)");
    reduce_cmd->add_option("--normalize", red_normalize,
                           "rescale to this H-infinity norm first (model mode)");
    reduce_cmd->add_option("--feedthrough", red_feedthrough,
                           "JSON array for D_r (dataset mode; default zero)");
    reduce_cmd->add_option("-o,--output", red_out, "output path");

    // hinf
    auto* hinf = app.add_subcommand("hinf", "Print the H-infinity norm of a model");
    std::string hinf_model;
    double hinf_tol = 1e-6;
    hinf->add_option("--model", hinf_model, "model JSON path")->required();
    hinf->add_option("--rel-tol", hinf_tol, "estimator relative tolerance");

    // run
    auto* run_cmd = app.add_subcommand("run", "Run the batch experiment from a config JSON");
    std::string run_config;
    run_cmd->add_option("--config", run_config, "config JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            spec.kind = qbt::model_kind_from_string(gen_kind);
            qbt::save_model(qbt::generate(spec), gen_out);
            std::cout << gen_out << "\n";
        } else if (sample->parsed()) {
            const qbt::StateSpaceSystem sys =
                load_and_maybe_normalize(sample_model, sample_normalize, 1e-6);
            const qbt::Variant variant = qbt::variant_from_string(sample_variant);
            const auto [left, right] = qbt::interleaved_rules(sample_wmin, sample_wmax, sample_N);
            const qbt::FrequencyDataset data =
                qbt::sample_dataset(qbt::make_oracles(sys, variant), left, right);
            qbt::save_dataset(data, sample_out);
            std::cout << sample_out << "\n";
        } else if (reduce_cmd->parsed()) {
            if (red_dataset.empty() == red_model.empty())
                throw qbt::InvalidInput("reduce needs exactly one of --dataset or --model");
            qbt::ReducedModel rom;
            if (!red_dataset.empty()) {
                const qbt::FrequencyDataset data = qbt::load_dataset(red_dataset);
                qbt::LoewnerQuadruple q = qbt::assemble_loewner(data);
                if (data.left.conj_closed && data.right.conj_closed) q = qbt::realify(q, data);
                std::optional<qbt::Matrix> D;
                if (!red_feedthrough.empty())
                    D = parse_feedthrough(red_feedthrough, data.p, data.m);
                rom = qbt::reduce(q, red_r, D);
                rom.variant = data.variant;
                rom.provenance.type = qbt::Provenance::Type::quadrature;
                rom.provenance.N_left = static_cast<int>(data.left.size());
                rom.provenance.N_right = static_cast<int>(data.right.size());
            } else {
                const qbt::StateSpaceSystem sys =
                    load_and_maybe_normalize(red_model, red_normalize, 1e-6);
                const qbt::Variant variant = qbt::variant_from_string(red_variant);
                if (red_method == "intrusive") {
                    rom = qbt::sqrt_bt(sys, variant, red_r);
                } else if (red_method == "quad") {
                    const auto [left, right] =
                        qbt::interleaved_rules(red_wmin, red_wmax, red_N);
                    rom = qbt::genquadbt_pipeline(qbt::make_oracles(sys, variant), left, right,
                                                  red_r, sys.D);
                } else {
                    throw qbt::InvalidInput("unknown method '" + red_method + "'");
                }
            }
            qbt::save_rom(rom, red_out);
            std::cout << red_out << "\n" << qbt::rom_sidecar_path(red_out) << "\n";
        } else if (hinf->parsed()) {
            const double norm = qbt::hinf_norm(qbt::load_model(hinf_model), hinf_tol);
            std::cout << qbt::format_double(norm) << "\n";
        } else if (run_cmd->parsed()) {
            for (const std::string& path : qbt::run(qbt::load_config(run_config)))
                std::cout << path << "\n";
        }
    } catch (const qbt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.category() == qbt::ErrorCategory::invalid_input ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
