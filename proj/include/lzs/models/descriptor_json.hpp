// JSON form of ModelDescriptor:
//   {"family": "...", "k": 4, "delta": 0.5 | [..], "slope": 1 | [..], "eps": 1.0}
#pragma once

#include <json.hpp>

#include <string>

#include "lzs/models/affine_model.hpp"

namespace lzs::models {

inline nlohmann::ordered_json param_to_json(const ScalarOrList& p) {
    if (const auto* d = std::get_if<double>(&p)) return *d;
    return std::get<std::vector<double>>(p);
}

inline ScalarOrList param_from_json(const nlohmann::json& j, const char* key) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array()) {
        std::vector<double> out;
        for (const auto& x : j) {
            if (!x.is_number()) {
                throw ValidationError(std::string("descriptor: '") + key + "' entries must be numbers");
            }
            out.push_back(x.get<double>());
        }
        if (out.empty()) throw ValidationError(std::string("descriptor: '") + key + "' is empty");
        return out;
    }
    throw ValidationError(std::string("descriptor: '") + key + "' must be a number or an array");
}

inline nlohmann::ordered_json descriptor_to_json(const ModelDescriptor& d) {
    nlohmann::ordered_json j;
    j["family"] = std::string(family_name(d.family));
    if (d.k) j["k"] = *d.k;
    j["delta"] = param_to_json(d.delta);
    j["slope"] = param_to_json(d.slope);
    if (d.eps) j["eps"] = *d.eps;
    return j;
}

inline ModelDescriptor descriptor_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("descriptor: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "family" && key != "k" && key != "delta" && key != "slope" && key != "eps") {
            throw ValidationError("descriptor: unknown key '" + key + "'");
        }
    }
    if (!j.contains("family") || !j["family"].is_string()) {
        throw ValidationError("descriptor: 'family' (string) is required");
    }
    ModelDescriptor d;
    d.family = parse_family(j["family"].get<std::string>());
    if (j.contains("k")) {
        if (!j["k"].is_number_integer()) throw ValidationError("descriptor: 'k' must be an integer");
        d.k = j["k"].get<int>();
    }
    if (!j.contains("delta")) throw ValidationError("descriptor: 'delta' is required");
    if (!j.contains("slope")) throw ValidationError("descriptor: 'slope' is required");
    d.delta = param_from_json(j["delta"], "delta");
    d.slope = param_from_json(j["slope"], "slope");
    if (j.contains("eps") && !j["eps"].is_null()) {
        if (!j["eps"].is_number()) throw ValidationError("descriptor: 'eps' must be a number");
        d.eps = j["eps"].get<double>();
    }
    return d;
}

inline ModelDescriptor descriptor_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("descriptor: invalid JSON: ") + e.what());
    }
    return descriptor_from_json(j);
}

}  // namespace lzs::models
