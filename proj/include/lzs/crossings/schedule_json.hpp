// JSON export of crossing schedules:
//   [{"index", "t_over_R", "eps_over_R", "levels", "delta_eff", "slope_eff", "kind"
//     [, "flat_mixing": [[re, im], ...]]}, ...]
#pragma once

#include <json.hpp>

#include <vector>

#include "lzs/crossings/event.hpp"

namespace lzs::crossings {

inline nlohmann::ordered_json event_to_json(const CrossingEvent& e) {
    nlohmann::ordered_json j;
    j["index"] = e.index;
    j["t_over_R"] = e.t_over_r;
    j["eps_over_R"] = e.eps_over_r;
    j["levels"] = e.levels;
    j["delta_eff"] = e.delta_eff;
    j["slope_eff"] = e.slope_eff;
    j["kind"] = std::string(kind_name(e.kind));
    if (!e.flat_mixing.empty()) {
        nlohmann::ordered_json w = nlohmann::ordered_json::array();
        for (const auto& c : e.flat_mixing) w.push_back({c.real(), c.imag()});
        j["flat_mixing"] = w;
    }
    return j;
}

inline nlohmann::ordered_json schedule_to_json(const std::vector<CrossingEvent>& schedule) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& e : schedule) out.push_back(event_to_json(e));
    return out;
}

inline CrossingEvent event_from_json(const nlohmann::json& j) {
    try {
        CrossingEvent e;
        e.index = j.at("index").get<int>();
        e.t_over_r = j.at("t_over_R").get<double>();
        e.eps_over_r = j.at("eps_over_R").get<double>();
        e.levels = j.at("levels").get<std::vector<int>>();
        e.delta_eff = j.at("delta_eff").get<double>();
        e.slope_eff = j.at("slope_eff").get<double>();
        e.kind = parse_kind(j.at("kind").get<std::string>());
        if (j.contains("flat_mixing")) {
            for (const auto& w : j.at("flat_mixing")) e.flat_mixing.emplace_back(w.at(0).get<double>(), w.at(1).get<double>());
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("crossing event JSON: ") + ex.what());
    }
}

inline std::vector<CrossingEvent> schedule_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ValidationError("crossing schedule JSON must be an array");
    std::vector<CrossingEvent> out;
    for (const auto& e : j) out.push_back(event_from_json(e));
    return out;
}

}  // namespace lzs::crossings
