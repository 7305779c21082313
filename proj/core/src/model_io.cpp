#include "sisopt/model_io.hpp"

#include <fstream>
#include <ostream>

#include "json.hpp"

namespace sisopt {

namespace {

using nlohmann::json;

json parse(std::istream& in, const char* what) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("failed to parse ") + what + ": " + e.what());
    }
    return j;
}

std::vector<double> as_vector(const json& j, const char* field) {
    if (!j.is_array())
        throw ParseError(std::string(field) + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number())
            throw ParseError(std::string(field) + " must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open " + path + " for writing");
    return out;
}

} // namespace

SisModel load_model(std::istream& in) {
    json j = parse(in, "model");
    if (!j.is_object() || !j.contains("weights") || !j.contains("kernel") ||
        !j.contains("gamma"))
        throw ParseError("model file needs weights, kernel and gamma fields");

    FeatureSpace space;
    space.weights = as_vector(j["weights"], "weights");
    const std::size_t n = space.weights.size();

    if (j.contains("labels") && !j["labels"].is_null()) {
        for (const auto& pair : j["labels"]) {
            auto v = as_vector(pair, "labels entry");
            if (v.size() != 2)
                throw ParseError("labels entries must be [a, b] pairs");
            space.labels.push_back({v[0], v[1]});
        }
    }

    if (!j["kernel"].is_array() || j["kernel"].size() != n)
        throw ParseError("kernel must be an n x n array of rows");
    std::vector<double> entries;
    entries.reserve(n * n);
    for (const auto& row : j["kernel"]) {
        auto r = as_vector(row, "kernel row");
        if (r.size() != n)
            throw ParseError("kernel rows must have n entries");
        entries.insert(entries.end(), r.begin(), r.end());
    }
    return SisModel(std::move(space), std::move(entries), as_vector(j["gamma"], "gamma"));
}

SisModel load_model_file(const std::string& path) {
    auto in = open_input(path);
    return load_model(in);
}

void save_model(const SisModel& model, std::ostream& out) {
    json j;
    j["weights"] = model.space.weights;
    const std::size_t n = model.size();
    json kernel = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t jj = 0; jj < n; ++jj)
            row.push_back(model.transmission(i, jj));
        kernel.push_back(std::move(row));
    }
    j["kernel"] = std::move(kernel);
    j["gamma"] = model.gamma;
    if (model.space.has_labels()) {
        json labels = json::array();
        for (const auto& iv : model.space.labels)
            labels.push_back(json::array({iv.lo, iv.hi}));
        j["labels"] = std::move(labels);
    }
    out << j.dump(2) << '\n';
}

void save_model_file(const SisModel& model, const std::string& path) {
    auto out = open_output(path);
    save_model(model, out);
}

Strategy load_strategy(std::istream& in) {
    json j = parse(in, "strategy");
    Strategy s;
    s.eta = as_vector(j, "strategy");
    s.validate();
    return s;
}

Strategy load_strategy_file(const std::string& path) {
    auto in = open_input(path);
    return load_strategy(in);
}

void save_strategy(const Strategy& eta, std::ostream& out) {
    out << json(eta.eta).dump() << '\n';
}

SiteMapping load_mapping(std::istream& in, const FeatureSpace& fine,
                         const FeatureSpace& coarse) {
    json j = parse(in, "mapping");
    if (!j.is_object() || !j.contains("fine_to_coarse"))
        throw ParseError("mapping file needs a fine_to_coarse array");
    SiteMapping mapping;
    for (const auto& v : j["fine_to_coarse"]) {
        if (!v.is_number_unsigned())
            throw ParseError("fine_to_coarse must contain non-negative integers");
        mapping.fine_to_coarse.push_back(v.get<std::size_t>());
    }
    mapping.fine_weights = fine.weights;
    mapping.coarse_weights = coarse.weights;
    mapping.validate();
    return mapping;
}

SiteMapping load_mapping_file(const std::string& path, const FeatureSpace& fine,
                              const FeatureSpace& coarse) {
    auto in = open_input(path);
    return load_mapping(in, fine, coarse);
}

void save_mapping(const SiteMapping& mapping, std::ostream& out) {
    json j;
    j["fine_to_coarse"] = mapping.fine_to_coarse;
    out << j.dump(2) << '\n';
}

void save_mapping_file(const SiteMapping& mapping, const std::string& path) {
    auto out = open_output(path);
    save_mapping(mapping, out);
}

} // namespace sisopt
