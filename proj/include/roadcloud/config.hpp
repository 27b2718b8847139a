/*
 * Copyright 2026 The roadcloud Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roadcloud/model.hpp"
#include "roadcloud/reservation.hpp"
#include "roadcloud/sim.hpp"

namespace roadcloud {

/// Horizon, warmup and replication policy for simulations, plus the state
/// cap guarding the analytic solver. Warmup defaults to 10% of the horizon.
struct SimulationParams {
    double horizon = 10'000.0;
    double warmup = -1.0;  // negative selects the default
    int replications = 30;
    std::uint64_t seed = 12345;
    std::size_t state_cap = 2'000'000;

    bool operator==(const SimulationParams&) const = default;
};

/// A validated configuration document. Sections are optional; each command
/// requires the sections it uses.
struct Document {
    std::optional<Capacity> capacity;
    std::optional<GameConfig> game;
    std::optional<std::vector<VmClassSpec>> classes;
    SimulationParams simulation;
    std::optional<sim::CorridorConfig> corridor;

    reservation::RateModel rate_model() const {
        if (!capacity || !classes) {
            throw ConfigError("configuration must provide capacity and classes");
        }
        return reservation::RateModel{*classes, *capacity, simulation.state_cap};
    }
};

namespace config_detail {

using nlohmann::json;

inline const json& member(const json& j, const std::string& path, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(path + "." + key + " must be present");
    }
    return *it;
}

inline double number_at(const json& j, const std::string& path, const char* key) {
    const json& v = member(j, path, key);
    if (!v.is_number()) {
        throw ConfigError(path + "." + key + " must be a number");
    }
    return v.get<double>();
}

inline double number_or(const json& j, const std::string& path, const char* key,
                        double fallback) {
    if (!j.contains(key)) return fallback;
    return number_at(j, path, key);
}

inline Capacity parse_capacity(const json& j) {
    if (!j.is_object()) throw ConfigError("capacity must be an object");
    Capacity cap;
    cap.compute_total = number_at(j, "capacity", "compute_total");
    cap.storage_total = number_at(j, "capacity", "storage_total");
    cap.compute_reserved = number_or(j, "capacity", "compute_reserved", 0.0);
    cap.storage_reserved = number_or(j, "capacity", "storage_reserved", 0.0);
    validate(cap);
    return cap;
}

inline GameConfig parse_game(const json& j, const Capacity& cap) {
    if (!j.is_object()) throw ConfigError("game must be an object");
    GameConfig cfg;
    cfg.capacity = cap;
    const json& players = member(j, "game", "players");
    if (!players.is_array()) throw ConfigError("game.players must be an array");
    for (std::size_t i = 0; i < players.size(); ++i) {
        const std::string path = "game.players[" + std::to_string(i) + "]";
        const json& p = players[i];
        if (!p.is_object()) throw ConfigError(path + " must be an object");
        VmGameParams params;
        params.alpha = number_at(p, path, "alpha");
        params.beta = number_at(p, path, "beta");
        params.price_compute = number_at(p, path, "price_compute");
        params.price_storage = number_at(p, path, "price_storage");
        cfg.players.push_back(params);
    }
    cfg.request_floor = number_or(j, "game", "request_floor", 0.0);
    cfg.tolerance = number_or(j, "game", "tolerance", 1e-6);
    cfg.max_iterations = static_cast<int>(number_or(j, "game", "max_iterations", 1000.0));
    if (j.contains("update_order")) {
        const std::string mode = j.at("update_order").get<std::string>();
        if (mode == "sequential") {
            cfg.update_order = UpdateOrder::sequential;
        } else if (mode == "simultaneous") {
            cfg.update_order = UpdateOrder::simultaneous;
        } else {
            throw ConfigError("game.update_order must be \"sequential\" or \"simultaneous\"");
        }
    }
    auto parse_initial = [&](const char* key, std::vector<double>& out) {
        if (!j.contains(key)) return;
        const json& arr = j.at(key);
        if (!arr.is_array()) throw ConfigError(std::string("game.") + key + " must be an array");
        for (const json& v : arr) out.push_back(v.get<double>());
    };
    parse_initial("initial_compute", cfg.initial_compute);
    parse_initial("initial_storage", cfg.initial_storage);
    validate(cfg);
    return cfg;
}

inline std::vector<VmClassSpec> parse_classes(const json& j) {
    if (!j.is_array()) throw ConfigError("classes must be an array");
    std::vector<VmClassSpec> classes;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string path = "classes[" + std::to_string(k) + "]";
        const json& c = j[k];
        if (!c.is_object()) throw ConfigError(path + " must be an object");
        VmClassSpec spec;
        spec.compute_req = number_at(c, path, "compute_req");
        spec.storage_req = number_at(c, path, "storage_req");
        spec.local_arrival_rate = number_or(c, path, "local_arrival_rate", 0.0);
        spec.local_departure_rate = number_or(c, path, "local_departure_rate", 0.0);
        spec.migrated_arrival_rate = number_or(c, path, "migrated_arrival_rate", 0.0);
        spec.migrated_departure_rate = number_or(c, path, "migrated_departure_rate", 0.0);
        validate(spec, path);
        classes.push_back(spec);
    }
    if (classes.empty()) throw ConfigError("classes must contain at least one class");
    return classes;
}

inline SimulationParams parse_simulation(const json& j) {
    if (!j.is_object()) throw ConfigError("simulation must be an object");
    SimulationParams params;
    params.horizon = number_or(j, "simulation", "horizon", params.horizon);
    params.warmup = number_or(j, "simulation", "warmup", -1.0);
    params.replications =
        static_cast<int>(number_or(j, "simulation", "replications", params.replications));
    const double seed = number_or(j, "simulation", "seed", static_cast<double>(params.seed));
    if (seed < 0.0) throw ConfigError("simulation.seed must be >= 0");
    params.seed = static_cast<std::uint64_t>(seed);
    const double cap =
        number_or(j, "simulation", "state_cap", static_cast<double>(params.state_cap));
    if (cap < 1.0) throw ConfigError("simulation.state_cap must be >= 1");
    params.state_cap = static_cast<std::size_t>(cap);
    if (!(params.horizon > 0.0)) throw ConfigError("simulation.horizon must be > 0");
    if (params.warmup < 0.0) params.warmup = 0.1 * params.horizon;
    if (!(params.warmup < params.horizon))
        throw ConfigError("simulation.warmup must be < horizon");
    if (params.replications < 1) throw ConfigError("simulation.replications must be >= 1");
    return params;
}

inline sim::CorridorConfig parse_corridor(const json& j, std::size_t class_count) {
    if (!j.is_object()) throw ConfigError("corridor must be an object");
    sim::CorridorConfig corridor;
    const json& rsus = member(j, "corridor", "rsus");
    if (!rsus.is_array()) throw ConfigError("corridor.rsus must be an array");
    for (std::size_t i = 0; i < rsus.size(); ++i) {
        const std::string path = "corridor.rsus[" + std::to_string(i) + "]";
        const json& r = rsus[i];
        sim::RsuRange range;
        range.begin = number_at(r, path, "begin");
        range.end = number_at(r, path, "end");
        range.cloudlet = static_cast<int>(number_at(r, path, "cloudlet"));
        corridor.rsus.push_back(range);
    }
    corridor.vehicle_arrival_rate = number_at(j, "corridor", "vehicle_arrival_rate");
    corridor.speed_min = number_at(j, "corridor", "speed_min");
    corridor.speed_max = number_at(j, "corridor", "speed_max");
    corridor.vehicular_cloud_probability =
        number_at(j, "corridor", "vehicular_cloud_probability");
    corridor.road_length = number_at(j, "corridor", "road_length");
    corridor.vm_class = static_cast<int>(number_or(j, "corridor", "vm_class", 0.0));
    sim::validate(corridor, class_count);
    return corridor;
}

} // namespace config_detail

/// Validates a parsed configuration document against every domain
/// invariant. The first violation is reported with its field path.
inline Document validate_config(const nlohmann::json& raw) {
    if (!raw.is_object()) {
        throw ConfigError("configuration root must be an object");
    }
    Document doc;
    if (raw.contains("capacity")) {
        doc.capacity = config_detail::parse_capacity(raw.at("capacity"));
    }
    if (raw.contains("game")) {
        if (!doc.capacity) throw ConfigError("capacity must be present when game is given");
        doc.game = config_detail::parse_game(raw.at("game"), *doc.capacity);
    }
    if (raw.contains("classes")) {
        if (!doc.capacity) throw ConfigError("capacity must be present when classes are given");
        doc.classes = config_detail::parse_classes(raw.at("classes"));
    }
    if (raw.contains("simulation")) {
        doc.simulation = config_detail::parse_simulation(raw.at("simulation"));
    } else {
        doc.simulation.warmup = 0.1 * doc.simulation.horizon;
    }
    if (raw.contains("corridor")) {
        if (!doc.classes) throw ConfigError("classes must be present when corridor is given");
        doc.corridor = config_detail::parse_corridor(raw.at("corridor"), doc.classes->size());
    }
    if (!doc.capacity) {
        throw ConfigError("capacity must be present");
    }
    return doc;
}

inline Document load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open configuration file: " + path);
    }
    nlohmann::json raw;
    try {
        in >> raw;
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError("configuration is not valid JSON: " + std::string(err.what()));
    }
    return validate_config(raw);
}

/// Serializes a validated document with all defaults materialized;
/// re-validating the result reproduces the document exactly.
inline nlohmann::json to_json(const Document& doc) {
    nlohmann::json out;
    if (doc.capacity) {
        out["capacity"] = {{"compute_total", doc.capacity->compute_total},
                           {"storage_total", doc.capacity->storage_total},
                           {"compute_reserved", doc.capacity->compute_reserved},
                           {"storage_reserved", doc.capacity->storage_reserved}};
    }
    if (doc.game) {
        nlohmann::json players = nlohmann::json::array();
        for (const VmGameParams& p : doc.game->players) {
            players.push_back({{"alpha", p.alpha},
                               {"beta", p.beta},
                               {"price_compute", p.price_compute},
                               {"price_storage", p.price_storage}});
        }
        nlohmann::json g = {{"players", std::move(players)},
                            {"request_floor", doc.game->request_floor},
                            {"tolerance", doc.game->tolerance},
                            {"max_iterations", doc.game->max_iterations},
                            {"update_order", doc.game->update_order == UpdateOrder::sequential
                                                 ? "sequential"
                                                 : "simultaneous"}};
        if (!doc.game->initial_compute.empty()) g["initial_compute"] = doc.game->initial_compute;
        if (!doc.game->initial_storage.empty()) g["initial_storage"] = doc.game->initial_storage;
        out["game"] = std::move(g);
    }
    if (doc.classes) {
        nlohmann::json classes = nlohmann::json::array();
        for (const VmClassSpec& c : *doc.classes) {
            classes.push_back({{"compute_req", c.compute_req},
                               {"storage_req", c.storage_req},
                               {"local_arrival_rate", c.local_arrival_rate},
                               {"local_departure_rate", c.local_departure_rate},
                               {"migrated_arrival_rate", c.migrated_arrival_rate},
                               {"migrated_departure_rate", c.migrated_departure_rate}});
        }
        out["classes"] = std::move(classes);
    }
    out["simulation"] = {{"horizon", doc.simulation.horizon},
                         {"warmup", doc.simulation.warmup},
                         {"replications", doc.simulation.replications},
                         {"seed", doc.simulation.seed},
                         {"state_cap", doc.simulation.state_cap}};
    if (doc.corridor) {
        nlohmann::json rsus = nlohmann::json::array();
        for (const sim::RsuRange& r : doc.corridor->rsus) {
            rsus.push_back({{"begin", r.begin}, {"end", r.end}, {"cloudlet", r.cloudlet}});
        }
        out["corridor"] = {{"rsus", std::move(rsus)},
                           {"vehicle_arrival_rate", doc.corridor->vehicle_arrival_rate},
                           {"speed_min", doc.corridor->speed_min},
                           {"speed_max", doc.corridor->speed_max},
                           {"vehicular_cloud_probability",
                            doc.corridor->vehicular_cloud_probability},
                           {"road_length", doc.corridor->road_length},
                           {"vm_class", doc.corridor->vm_class}};
    }
    return out;
}

/// FNV-1a hash of the canonical serialization; whitespace and key order of
/// the original file do not affect it.
inline std::string config_hash(const nlohmann::json& raw) {
    const std::string canonical = raw.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace roadcloud
