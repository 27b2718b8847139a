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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace roadcloud {

/// Raised by validation with a message of the form
/// "<field path> must <constraint>", e.g. "game.players[2].alpha must be > 0".
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cloud-site resource pools: totals plus the portion reserved for migrated
/// VMs. Common resources (total minus reserved) are what local VMs share.
struct Capacity {
    double compute_total = 0.0;
    double storage_total = 0.0;
    double compute_reserved = 0.0;
    double storage_reserved = 0.0;

    double compute_common() const { return compute_total - compute_reserved; }
    double storage_common() const { return storage_total - storage_reserved; }

    bool operator==(const Capacity&) const = default;
};

/// Per-player weights and prices of the allocation game.
struct VmGameParams {
    double alpha = 1.0;          // compute weight
    double beta = 1.0;           // storage weight
    double price_compute = 1.0;  // price per applied compute unit
    double price_storage = 1.0;  // price per applied storage unit

    bool operator==(const VmGameParams&) const = default;
};

enum class UpdateOrder { sequential, simultaneous };

struct GameConfig {
    Capacity capacity;
    std::vector<VmGameParams> players;
    double request_floor = 0.0;  // smallest admissible request; 0 selects the default
    double tolerance = 1e-6;     // relative to max(C, M)
    int max_iterations = 1000;
    UpdateOrder update_order = UpdateOrder::sequential;
    std::vector<double> initial_compute;  // optional; empty selects the default start
    std::vector<double> initial_storage;

    std::size_t player_count() const { return players.size(); }

    bool operator==(const GameConfig&) const = default;
};

/// Requests and proportional shares for all players at some iteration.
struct AllocationProfile {
    std::vector<double> requests_compute;
    std::vector<double> requests_storage;
    std::vector<double> shares_compute;
    std::vector<double> shares_storage;
    int iterations_used = 0;
    bool converged = false;
};

/// Cumulative applied-resource counters used for long-term fairness.
/// A player whose counter has reached the cap is ineligible for that
/// resource type until all players have reached it, at which point the
/// counters of that type reset together.
struct VrcState {
    std::vector<double> applied_compute;
    std::vector<double> applied_storage;
    double cap_compute = 0.0;
    double cap_storage = 0.0;
};

/// Resource footprint and traffic rates of one VM class.
struct VmClassSpec {
    double compute_req = 0.0;
    double storage_req = 0.0;
    double local_arrival_rate = 0.0;
    double local_departure_rate = 0.0;     // per resident VM
    double migrated_arrival_rate = 0.0;
    double migrated_departure_rate = 0.0;  // per resident VM

    bool operator==(const VmClassSpec&) const = default;
};

/// Markov state: per-class counts of local and migrated VMs.
struct OccupancyState {
    std::vector<int> local_counts;
    std::vector<int> migrated_counts;

    bool operator==(const OccupancyState&) const = default;
};

struct SteadyStateSolution {
    std::vector<OccupancyState> states;
    std::vector<double> probabilities;
    double blocking_rate = 0.0;
    double dropping_rate = 0.0;
    double blocking_probability = 0.0;
    double dropping_probability = 0.0;
};

// -- validation ------------------------------------------------------------

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& constraint) {
    throw ConfigError(path + " must " + constraint);
}

} // namespace detail

inline void validate(const Capacity& cap, const std::string& path = "capacity") {
    if (!(cap.compute_total > 0.0)) detail::fail(path + ".compute_total", "be > 0");
    if (!(cap.storage_total > 0.0)) detail::fail(path + ".storage_total", "be > 0");
    if (!(cap.compute_reserved >= 0.0)) detail::fail(path + ".compute_reserved", "be >= 0");
    if (!(cap.storage_reserved >= 0.0)) detail::fail(path + ".storage_reserved", "be >= 0");
    if (!(cap.compute_reserved < cap.compute_total))
        detail::fail(path + ".compute_reserved",
                     "be < compute_total (common compute resources would be empty)");
    if (!(cap.storage_reserved < cap.storage_total))
        detail::fail(path + ".storage_reserved",
                     "be < storage_total (common storage resources would be empty)");
}

inline void validate(const VmGameParams& p, const std::string& path) {
    if (!(p.alpha > 0.0)) detail::fail(path + ".alpha", "be > 0");
    if (!(p.beta > 0.0)) detail::fail(path + ".beta", "be > 0");
    if (!(p.price_compute > 0.0)) detail::fail(path + ".price_compute", "be > 0");
    if (!(p.price_storage > 0.0)) detail::fail(path + ".price_storage", "be > 0");
}

/// Validates a game configuration and materializes the request-floor
/// default (min(C, M) * 1e-6) when none was given.
inline void validate(GameConfig& cfg, const std::string& path = "game") {
    validate(cfg.capacity, "capacity");
    if (cfg.players.empty()) detail::fail(path + ".players", "contain at least one player");
    for (std::size_t i = 0; i < cfg.players.size(); ++i) {
        validate(cfg.players[i], path + ".players[" + std::to_string(i) + "]");
    }
    const double c_total = cfg.capacity.compute_total;
    const double m_total = cfg.capacity.storage_total;
    if (cfg.request_floor == 0.0) {
        cfg.request_floor = std::min(c_total, m_total) * 1e-6;
    }
    if (!(cfg.request_floor > 0.0)) detail::fail(path + ".request_floor", "be > 0");
    if (!(cfg.request_floor <= c_total / 1000.0 && cfg.request_floor <= m_total / 1000.0))
        detail::fail(path + ".request_floor", "be <= min(C, M)/1000");
    if (!(cfg.tolerance > 0.0)) detail::fail(path + ".tolerance", "be > 0");
    if (cfg.max_iterations < 1) detail::fail(path + ".max_iterations", "be >= 1");
    auto check_initial = [&](const std::vector<double>& init, double total, const char* name) {
        if (init.empty()) return;
        if (init.size() != cfg.players.size())
            detail::fail(path + "." + name, "have one entry per player");
        for (std::size_t i = 0; i < init.size(); ++i) {
            if (!(init[i] > 0.0 && init[i] <= total))
                detail::fail(path + "." + name + "[" + std::to_string(i) + "]",
                             "lie in (0, total]");
        }
    };
    check_initial(cfg.initial_compute, c_total, "initial_compute");
    check_initial(cfg.initial_storage, m_total, "initial_storage");
}

inline void validate(const VmClassSpec& spec, const std::string& path) {
    if (!(spec.compute_req >= 0.0)) detail::fail(path + ".compute_req", "be >= 0");
    if (!(spec.storage_req >= 0.0)) detail::fail(path + ".storage_req", "be >= 0");
    if (!(spec.compute_req > 0.0 || spec.storage_req > 0.0))
        detail::fail(path + ".compute_req", "be > 0 unless storage_req is > 0");
    if (!(spec.local_arrival_rate >= 0.0)) detail::fail(path + ".local_arrival_rate", "be >= 0");
    if (!(spec.migrated_arrival_rate >= 0.0))
        detail::fail(path + ".migrated_arrival_rate", "be >= 0");
    if (!(spec.local_departure_rate >= 0.0))
        detail::fail(path + ".local_departure_rate", "be >= 0");
    if (!(spec.migrated_departure_rate >= 0.0))
        detail::fail(path + ".migrated_departure_rate", "be >= 0");
    if (spec.local_arrival_rate > 0.0 && !(spec.local_departure_rate > 0.0))
        detail::fail(path + ".local_departure_rate", "be > 0 when local_arrival_rate is > 0");
    if (spec.migrated_arrival_rate > 0.0 && !(spec.migrated_departure_rate > 0.0))
        detail::fail(path + ".migrated_departure_rate",
                     "be > 0 when migrated_arrival_rate is > 0");
}

/// Both feasibility constraints of the reservation scheme: local VMs fit in
/// the common resources, and all VMs together fit in the full resources.
inline bool occupancy_feasible(const OccupancyState& s, const std::vector<VmClassSpec>& classes,
                               const Capacity& cap) {
    if (s.local_counts.size() != classes.size() || s.migrated_counts.size() != classes.size()) {
        return false;
    }
    double local_c = 0.0, local_m = 0.0, total_c = 0.0, total_m = 0.0;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        if (s.local_counts[k] < 0 || s.migrated_counts[k] < 0) return false;
        const double n_l = static_cast<double>(s.local_counts[k]);
        const double n_g = static_cast<double>(s.migrated_counts[k]);
        local_c += n_l * classes[k].compute_req;
        local_m += n_l * classes[k].storage_req;
        total_c += (n_l + n_g) * classes[k].compute_req;
        total_m += (n_l + n_g) * classes[k].storage_req;
    }
    return local_c <= cap.compute_common() && local_m <= cap.storage_common() &&
           total_c <= cap.compute_total && total_m <= cap.storage_total;
}

} // namespace roadcloud
