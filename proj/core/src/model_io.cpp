#include "odeid/model_io.hpp"

#include <fstream>

#include "json.hpp"

namespace odeid {

using nlohmann::json;

std::string model_to_json(const RecoveredModel &model) {
    json j;
    j["dimension"] = model.basis.dimension;
    j["max_degree"] = model.basis.max_degree;
    j["include_constant"] = model.basis.include_constant;
    j["threshold_pct"] = model.threshold_pct;
    j["domain"] = {model.t_min, model.t_max};
    j["component_names"] = model.component_names;
    j["coefficients"] = model.coeffs;
    json active = json::array();
    for (const auto &mask : model.active) {
        json row = json::array();
        for (auto v : mask) row.push_back(v != 0);
        active.push_back(row);
    }
    j["active"] = active;
    return j.dump(2) + "\n";
}

RecoveredModel model_from_json(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw Error(std::string("model file: invalid json: ") + e.what());
    }
    try {
        MonomialBasis basis(j.at("dimension").get<int>(), j.at("max_degree").get<int>(),
                            j.at("include_constant").get<bool>());
        RecoveredModel model{basis,
                             basis.enumerate(),
                             j.at("coefficients").get<std::vector<std::vector<double>>>(),
                             {},
                             j.at("threshold_pct").get<double>(),
                             j.at("domain").at(0).get<double>(),
                             j.at("domain").at(1).get<double>(),
                             j.at("component_names").get<std::vector<std::string>>()};
        for (const auto &row : j.at("active")) {
            std::vector<std::uint8_t> mask;
            for (const auto &v : row) mask.push_back(v.get<bool>() ? 1 : 0);
            model.active.push_back(std::move(mask));
        }
        const std::size_t n = model.coeffs.size();
        if (n == 0 || model.active.size() != n || model.component_names.size() != n)
            throw Error("model file: inconsistent component counts");
        if (static_cast<int>(n) != basis.dimension)
            throw Error("model file: coefficient rows do not match the dimension");
        for (std::size_t k = 0; k < n; ++k)
            if (model.coeffs[k].size() != model.terms.size() ||
                model.active[k].size() != model.terms.size())
                throw Error("model file: coefficient count does not match the basis size");
        if (!(model.t_min < model.t_max)) throw Error("model file: degenerate domain");
        return model;
    } catch (const json::exception &e) {
        throw Error(std::string("model file: missing or malformed field: ") + e.what());
    }
}

void save_model(const std::filesystem::path &path, const RecoveredModel &model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file: " + path.string());
    out << model_to_json(model);
}

RecoveredModel load_model(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read model file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

} // namespace odeid
