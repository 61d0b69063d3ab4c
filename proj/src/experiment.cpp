#include "qbt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "json.hpp"

namespace qbt {

void ExperimentConfig::validate() const {
    if (model_spec.has_value() == !model_path.empty())
        throw InvalidInput("config must name exactly one of an inline model or a model path");
    if (variants.empty()) throw InvalidInput("config must list at least one variant");
    if (!(omega_min > 0.0) || !(omega_min < omega_max))
        throw InvalidRange("need 0 < omega_min < omega_max");
    for (int N : N_list)
        if (N < 4 || N % 2 != 0) throw OddN("N_list entries must be even and at least 4");
    if (orders.empty()) throw InvalidInput("config must list at least one order");
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 1) throw InvalidInput("orders must be positive");
        if (i > 0 && orders[i] <= orders[i - 1])
            throw InvalidInput("orders must be strictly ascending");
    }
    if (normalization && !(*normalization > 0.0 && *normalization <= 1.0))
        throw InvalidRange("normalization target must lie in (0, 1]");
    if (!(hinf_rel_tol > 0.0)) throw InvalidRange("hinf_rel_tol must be positive");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
    }

    ExperimentConfig config;
    const nlohmann::json& model = j.at("model");
    if (model.contains("path")) {
        config.model_path = model.at("path").get<std::string>();
    } else {
        ModelSpec spec;
        spec.kind = model_kind_from_string(model.at("kind").get<std::string>());
        spec.n = model.at("n").get<Eigen::Index>();
        spec.seed = model.value("seed", std::uint64_t{0});
        if (model.contains("params")) {
            const nlohmann::json& params = model.at("params");
            spec.R = params.value("R", spec.R);
            spec.L = params.value("L", spec.L);
            spec.C = params.value("C", spec.C);
            spec.Rbar = params.value("Rbar", spec.Rbar);
            spec.m = params.value("m", spec.m);
            spec.p = params.value("p", spec.p);
        }
        config.model_spec = spec;
    }
    if (j.contains("variants")) {
        config.variants.clear();
        for (const auto& name : j.at("variants"))
            config.variants.push_back(variant_from_string(name.get<std::string>()));
    }
    if (j.contains("quadrature")) {
        const nlohmann::json& quad = j.at("quadrature");
        config.omega_min = quad.value("omega_min", config.omega_min);
        config.omega_max = quad.value("omega_max", config.omega_max);
        if (quad.contains("N_list")) config.N_list = quad.at("N_list").get<std::vector<int>>();
    }
    if (j.contains("orders")) config.orders = j.at("orders").get<std::vector<int>>();
    if (j.contains("normalization")) {
        if (j.at("normalization").is_null())
            config.normalization.reset();
        else
            config.normalization = j.at("normalization").get<double>();
    }
    config.output_dir = j.value("output_dir", config.output_dir);
    config.hinf_rel_tol = j.value("hinf_rel_tol", config.hinf_rel_tol);
    config.validate();
    return config;
}

double compare_models(const StateSpaceSystem& sys, const StateSpaceSystem& rom,
                      double rel_tol) {
    if (sys.num_inputs() != rom.num_inputs() || sys.num_outputs() != rom.num_outputs())
        throw DimensionMismatch("compare_models: port dimensions differ");
    if (!sys.is_stable() || !rom.is_stable())
        throw UnstableSystem("compare_models requires stable systems");

    const Eigen::Index n1 = sys.order(), n2 = rom.order();
    Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = sys.A;
    A.bottomRightCorner(n2, n2) = rom.A;
    Matrix B(n1 + n2, sys.num_inputs());
    B.topRows(n1) = sys.B;
    B.bottomRows(n2) = rom.B;
    Matrix C(sys.num_outputs(), n1 + n2);
    C.leftCols(n1) = sys.C;
    C.rightCols(n2) = -rom.C;
    const StateSpaceSystem error_sys{A, B, C, sys.D - rom.D};
    return hinf_norm(error_sys, rel_tol) / hinf_norm(sys, rel_tol);
}

namespace {

std::string csv_cell(double value) {
    if (std::isnan(value)) return "nan";
    return format_double(value);
}

struct Cell {
    double value = std::numeric_limits<double>::quiet_NaN();
    std::string reason;
};

}  // namespace

std::vector<std::string> run(const ExperimentConfig& config) {
    config.validate();
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);

    const StateSpaceSystem base =
        config.model_spec ? generate(*config.model_spec) : load_model(config.model_path);

    std::vector<std::string> written;
    std::ostringstream manifest_variants;
    bool first_variant = true;

    for (Variant variant : config.variants) {
        StateSpaceSystem model = base;
        if (variant == Variant::brbt && config.normalization)
            model = normalize_hinf(model, *config.normalization, config.hinf_rel_tol);

        const SpectralFactorSet factors = build_factors(model, variant);
        GramianPair pair;
        pair.variant = variant;
        switch (variant) {
            case Variant::lyapunov:
                pair.P_X = factors.gramian("P");
                pair.Q_Y = factors.gramian("Q");
                break;
            case Variant::bst:
                pair.P_X = factors.gramian("P");
                pair.Q_Y = factors.gramian("Q_W");
                break;
            case Variant::prbt:
                pair.P_X = factors.gramian("P_N");
                pair.Q_Y = factors.gramian("Q_M");
                break;
            case Variant::brbt:
                pair.P_X = factors.gramian("P_K");
                pair.Q_Y = factors.gramian("Q_J");
                break;
        }
        pair.U_X = pair.P_X.sqrt_factor();
        pair.L_Y = pair.Q_Y.sqrt_factor();
        const Eigen::VectorXd sigma_true = hankel_singular_values(pair);
        const OracleTriple oracles = make_oracles(model, factors);

        // Quadrature assembly per N; a failed assembly poisons that column.
        std::vector<std::vector<double>> sigma_quad(config.N_list.size());
        std::vector<std::optional<LoewnerQuadruple>> quadruples(config.N_list.size());
        std::vector<std::string> assembly_errors(config.N_list.size());
        for (std::size_t ni = 0; ni < config.N_list.size(); ++ni) {
            try {
                const auto [left, right] =
                    interleaved_rules(config.omega_min, config.omega_max, config.N_list[ni]);
                const FrequencyDataset data = sample_dataset(oracles, left, right);
                LoewnerQuadruple q = assemble_loewner(data);
                q = realify(q, data);
                Eigen::VectorXd sv = Eigen::BDCSVD<CMatrix>(q.L).singularValues();
                sigma_quad[ni].assign(sv.data(), sv.data() + sv.size());
                quadruples[ni] = std::move(q);
            } catch (const Error& e) {
                assembly_errors[ni] = e.what();
            }
        }

        // singular_values_<variant>.csv
        {
            std::ostringstream csv;
            csv << "index,sigma_true";
            for (int N : config.N_list) csv << ",sigma_quad_N" << N;
            csv << "\n";
            std::size_t rows = static_cast<std::size_t>(sigma_true.size());
            for (const auto& col : sigma_quad) rows = std::max(rows, col.size());
            for (std::size_t i = 0; i < rows; ++i) {
                csv << (i + 1) << ",";
                csv << (i < static_cast<std::size_t>(sigma_true.size())
                            ? format_double(sigma_true(static_cast<Eigen::Index>(i)))
                            : std::string());
                for (const auto& col : sigma_quad)
                    csv << "," << (i < col.size() ? format_double(col[i]) : std::string());
                csv << "\n";
            }
            const std::string path =
                (fs::path(config.output_dir) / ("singular_values_" + to_string(variant) + ".csv"))
                    .string();
            std::ofstream out(path, std::ios::binary);
            out << csv.str();
            written.push_back(path);
        }

        // errors_<variant>.csv
        {
            std::ostringstream csv;
            csv << "r,err_intrusive";
            for (int N : config.N_list) csv << ",err_quad_N" << N;
            csv << ",reason\n";
            for (int r : config.orders) {
                Cell intrusive;
                try {
                    const ReducedModel rom = sqrt_bt(model, pair, r);
                    intrusive.value = compare_models(model, rom.to_system(), config.hinf_rel_tol);
                } catch (const Error& e) {
                    intrusive.reason = std::string("intrusive: ") + e.what();
                }
                std::vector<Cell> quad(config.N_list.size());
                for (std::size_t ni = 0; ni < config.N_list.size(); ++ni) {
                    const std::string label = "quad_N" + std::to_string(config.N_list[ni]);
                    if (!quadruples[ni]) {
                        quad[ni].reason = label + ": " + assembly_errors[ni];
                        continue;
                    }
                    try {
                        const ReducedModel rom = reduce(*quadruples[ni], r, model.D);
                        quad[ni].value =
                            compare_models(model, rom.to_system(), config.hinf_rel_tol);
                    } catch (const Error& e) {
                        quad[ni].reason = label + ": " + e.what();
                    }
                }
                csv << r << "," << csv_cell(intrusive.value);
                for (const Cell& cell : quad) csv << "," << csv_cell(cell.value);
                std::string reason = intrusive.reason;
                for (const Cell& cell : quad) {
                    if (cell.reason.empty()) continue;
                    if (!reason.empty()) reason += " | ";
                    reason += cell.reason;
                }
                csv << ",\"" << reason << "\"\n";
            }
            const std::string path =
                (fs::path(config.output_dir) / ("errors_" + to_string(variant) + ".csv")).string();
            std::ofstream out(path, std::ios::binary);
            out << csv.str();
            written.push_back(path);
        }

        if (!first_variant) manifest_variants << ",";
        first_variant = false;
        manifest_variants << "\"" << to_string(variant) << "\"";
    }

    // manifest.json echoing the resolved configuration
    {
        std::ostringstream man;
        man << "{\"tool\":\"qbt\",\"version\":\"0.1.0\"";
        man << ",\"model\":";
        if (config.model_spec) {
            const ModelSpec& spec = *config.model_spec;
            man << "{\"kind\":\"" << to_string(spec.kind) << "\",\"n\":" << spec.n
                << ",\"seed\":" << spec.seed << ",\"params\":{\"R\":" << format_double(spec.R)
                << ",\"L\":" << format_double(spec.L) << ",\"C\":" << format_double(spec.C)
                << ",\"Rbar\":" << format_double(spec.Rbar) << ",\"m\":" << spec.m
                << ",\"p\":" << spec.p << "}}";
        } else {
            man << "{\"path\":\"" << config.model_path << "\"}";
        }
        man << ",\"variants\":[" << manifest_variants.str() << "]";
        man << ",\"quadrature\":{\"omega_min\":" << format_double(config.omega_min)
            << ",\"omega_max\":" << format_double(config.omega_max) << ",\"N_list\":[";
        for (std::size_t i = 0; i < config.N_list.size(); ++i)
            man << (i ? "," : "") << config.N_list[i];
        man << "]},\"orders\":[";
        for (std::size_t i = 0; i < config.orders.size(); ++i)
            man << (i ? "," : "") << config.orders[i];
        man << "]";
        man << ",\"normalization\":"
            << (config.normalization ? format_double(*config.normalization) : "null");
        man << ",\"hinf_rel_tol\":" << format_double(config.hinf_rel_tol);
        man << ",\"output_dir\":\"" << config.output_dir << "\"}\n";
        const std::string path = (fs::path(config.output_dir) / "manifest.json").string();
        std::ofstream out(path, std::ios::binary);
        out << man.str();
        written.push_back(path);
    }
    return written;
}

}  // namespace qbt
