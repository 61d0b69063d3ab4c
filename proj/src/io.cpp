#include "qbt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qbt {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << text;
}

void append_matrix(std::ostringstream& out, const Matrix& M) {
    out << "[";
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (i != 0 || j != 0) out << ",";
            out << format_double(M(i, j));
        }
    out << "]";
}

Matrix matrix_from_json(const json& arr, Eigen::Index rows, Eigen::Index cols,
                        const char* name) {
    if (!arr.is_array() || arr.size() != static_cast<std::size_t>(rows * cols))
        throw InvalidInput(std::string("field '") + name + "' must hold " +
                           std::to_string(rows * cols) + " numbers");
    Matrix M(rows, cols);
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = arr[at++].get<double>();
    return M;
}

void append_rule(std::ostringstream& out, const QuadratureRule& rule) {
    out << "{\"nodes\":[";
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        out << (i ? "," : "") << format_double(rule.nodes[i]);
    out << "],\"weights\":[";
    for (std::size_t i = 0; i < rule.weights.size(); ++i)
        out << (i ? "," : "") << format_double(rule.weights[i]);
    out << "],\"conj_closed\":" << (rule.conj_closed ? "true" : "false") << "}";
}

QuadratureRule rule_from_json(const json& j) {
    QuadratureRule rule;
    rule.nodes = j.at("nodes").get<std::vector<double>>();
    rule.weights = j.at("weights").get<std::vector<double>>();
    rule.conj_closed = j.at("conj_closed").get<bool>();
    rule.validate();
    return rule;
}

void append_samples(std::ostringstream& out, const std::vector<CMatrix>& samples) {
    out << "[";
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (k) out << ",";
        out << "[";
        const CMatrix& S = samples[k];
        bool first = true;
        for (Eigen::Index i = 0; i < S.rows(); ++i)
            for (Eigen::Index j = 0; j < S.cols(); ++j) {
                if (!first) out << ",";
                first = false;
                out << "[" << format_double(S(i, j).real()) << ","
                    << format_double(S(i, j).imag()) << "]";
            }
        out << "]";
    }
    out << "]";
}

std::vector<CMatrix> samples_from_json(const json& arr, Eigen::Index rows,
                                       Eigen::Index cols, const char* name) {
    if (!arr.is_array()) throw InvalidInput(std::string(name) + " must be an array");
    std::vector<CMatrix> samples;
    samples.reserve(arr.size());
    for (const json& node : arr) {
        if (!node.is_array() || node.size() != static_cast<std::size_t>(rows * cols))
            throw InvalidInput(std::string(name) + ": sample shape mismatch");
        CMatrix S(rows, cols);
        std::size_t at = 0;
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) {
                const json& pair = node[at++];
                if (!pair.is_array() || pair.size() != 2)
                    throw InvalidInput(std::string(name) + ": entries must be [re, im]");
                S(i, j) = Complex(pair[0].get<double>(), pair[1].get<double>());
            }
        samples.push_back(std::move(S));
    }
    return samples;
}

}  // namespace

void save_model(const StateSpaceSystem& sys, const std::string& path) {
    std::ostringstream out;
    out << "{\"n\":" << sys.order() << ",\"m\":" << sys.num_inputs()
        << ",\"p\":" << sys.num_outputs();
    out << ",\"A\":";
    append_matrix(out, sys.A);
    out << ",\"B\":";
    append_matrix(out, sys.B);
    out << ",\"C\":";
    append_matrix(out, sys.C);
    out << ",\"D\":";
    append_matrix(out, sys.D);
    out << "}\n";
    write_file(path, out.str());
}

StateSpaceSystem load_model(const std::string& path) {
    const json j = parse_file(path);
    const auto n = j.at("n").get<Eigen::Index>();
    const auto m = j.at("m").get<Eigen::Index>();
    const auto p = j.at("p").get<Eigen::Index>();
    if (n < 0 || m < 1 || p < 1) throw InvalidInput("model dimensions out of range");
    return {matrix_from_json(j.at("A"), n, n, "A"), matrix_from_json(j.at("B"), n, m, "B"),
            matrix_from_json(j.at("C"), p, n, "C"), matrix_from_json(j.at("D"), p, m, "D")};
}

void save_dataset(const FrequencyDataset& data, const std::string& path) {
    data.validate();
    std::ostringstream out;
    out << "{\"variant\":\"" << to_string(data.variant) << "\"";
    out << ",\"shapes\":{\"p_y\":" << data.p_y << ",\"m_x\":" << data.m_x
        << ",\"p\":" << data.p << ",\"m\":" << data.m << "}";
    out << ",\"left\":";
    append_rule(out, data.left);
    out << ",\"right\":";
    append_rule(out, data.right);
    out << ",\"GsA_left\":";
    append_samples(out, data.GsA_left);
    out << ",\"GC_left\":";
    append_samples(out, data.GC_left);
    out << ",\"GsA_right\":";
    append_samples(out, data.GsA_right);
    out << ",\"GB_right\":";
    append_samples(out, data.GB_right);
    out << "}\n";
    write_file(path, out.str());
}

FrequencyDataset load_dataset(const std::string& path) {
    const json j = parse_file(path);
    FrequencyDataset data;
    data.variant = variant_from_string(j.at("variant").get<std::string>());
    const json& shapes = j.at("shapes");
    data.p_y = shapes.at("p_y").get<Eigen::Index>();
    data.m_x = shapes.at("m_x").get<Eigen::Index>();
    data.p = shapes.at("p").get<Eigen::Index>();
    data.m = shapes.at("m").get<Eigen::Index>();
    data.left = rule_from_json(j.at("left"));
    data.right = rule_from_json(j.at("right"));
    data.GsA_left = samples_from_json(j.at("GsA_left"), data.p_y, data.m_x, "GsA_left");
    data.GC_left = samples_from_json(j.at("GC_left"), data.p, data.m_x, "GC_left");
    data.GsA_right = samples_from_json(j.at("GsA_right"), data.p_y, data.m_x, "GsA_right");
    data.GB_right = samples_from_json(j.at("GB_right"), data.p_y, data.m, "GB_right");
    data.validate();
    return data;
}

std::string rom_sidecar_path(const std::string& path) {
    const std::string suffix = ".json";
    if (path.size() > suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return path.substr(0, path.size() - suffix.size()) + "_sv.json";
    return path + "_sv.json";
}

void save_rom(const ReducedModel& rom, const std::string& path) {
    save_model(rom.to_system(), path);
    std::ostringstream out;
    out << "{\"variant\":\"" << to_string(rom.variant) << "\"";
    out << ",\"provenance\":\"" << rom.provenance.str() << "\"";
    out << ",\"singular_values\":[";
    for (std::size_t i = 0; i < rom.singular_values.size(); ++i)
        out << (i ? "," : "") << format_double(rom.singular_values[i]);
    out << "]}\n";
    write_file(rom_sidecar_path(path), out.str());
}

}  // namespace qbt
