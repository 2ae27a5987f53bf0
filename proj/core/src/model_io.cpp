#include "dirate/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace dirate {

namespace {

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("model file " + path + ": " + e.what());
    }
    return doc;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw ValidationError("write failed: " + path);
}

// "transition" may be a flat array or an array of rows.
std::vector<double> as_flat_matrix(const nlohmann::json& node) {
    std::vector<double> out;
    if (node.is_array() && !node.empty() && node.front().is_array()) {
        for (const auto& row : node) {
            for (const auto& value : row) {
                out.push_back(value.get<double>());
            }
        }
        return out;
    }
    return node.get<std::vector<double>>();
}

} // namespace

JointMarkovModel load_joint_model(const std::string& path) {
    nlohmann::json doc = read_json(path);
    try {
        return JointMarkovModel(doc.at("k").get<int>(), Alphabet{doc.at("m").get<int>()},
                                Alphabet{doc.at("ell").get<int>()},
                                as_flat_matrix(doc.at("transition")),
                                doc.at("initial").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("model file " + path + ": " + e.what());
    }
}

UnivariateMarkovModel load_univariate_model(const std::string& path) {
    nlohmann::json doc = read_json(path);
    if (doc.contains("ell")) {
        throw ValidationError("model file " + path +
                              " is a joint model (has \"ell\"); expected a univariate one");
    }
    try {
        return UnivariateMarkovModel(doc.at("k").get<int>(), Alphabet{doc.at("m").get<int>()},
                                     as_flat_matrix(doc.at("transition")),
                                     doc.at("initial").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("model file " + path + ": " + e.what());
    }
}

bool model_file_is_joint(const std::string& path) { return read_json(path).contains("ell"); }

void save_model(const std::string& path, const JointMarkovModel& model) {
    nlohmann::json doc;
    doc["k"] = model.order();
    doc["m"] = model.m();
    doc["ell"] = model.ell();
    doc["transition"] = std::vector<double>(
        model.row(0).data(), model.row(0).data() + model.num_contexts() * model.arity());
    doc["initial"] = std::vector<double>(model.initial().begin(), model.initial().end());
    write_json(path, doc);
}

void save_model(const std::string& path, const UnivariateMarkovModel& model) {
    nlohmann::json doc;
    doc["k"] = model.order();
    doc["m"] = model.m();
    doc["transition"] = std::vector<double>(
        model.row(0).data(), model.row(0).data() + model.num_contexts() * model.m());
    doc["initial"] = std::vector<double>(model.initial().begin(), model.initial().end());
    write_json(path, doc);
}

} // namespace dirate
