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
#include <string>
#include <vector>

#include <json.hpp>

#include "roadcloud/game.hpp"
#include "roadcloud/model.hpp"
#include "roadcloud/reservation.hpp"
#include "roadcloud/sim.hpp"

namespace roadcloud::csv {

/// Shortest exact decimal representation (same renderer as the JSON dumper);
/// identical inputs always produce identical bytes.
inline std::string number(double v) {
    return nlohmann::json(v).dump();
}

inline std::string number(long v) {
    return std::to_string(v);
}

inline std::string allocation_csv(const AllocationProfile& profile, const GameConfig& cfg) {
    std::string out = "player,request_compute,request_storage,share_compute,share_storage,utility\n";
    for (std::size_t i = 0; i < profile.requests_compute.size(); ++i) {
        out += std::to_string(i) + ',' + number(profile.requests_compute[i]) + ',' +
               number(profile.requests_storage[i]) + ',' + number(profile.shares_compute[i]) +
               ',' + number(profile.shares_storage[i]) + ',' +
               number(game::utility(i, profile.requests_compute, profile.requests_storage, cfg)) +
               '\n';
    }
    return out;
}

inline std::string trajectory_csv(const std::vector<game::TraceRow>& trace) {
    std::string out =
        "round,player,request_compute,request_storage,share_compute,share_storage,utility\n";
    for (const game::TraceRow& row : trace) {
        out += std::to_string(row.round) + ',' + std::to_string(row.player) + ',' +
               number(row.request_compute) + ',' + number(row.request_storage) + ',' +
               number(row.share_compute) + ',' + number(row.share_storage) + ',' +
               number(row.utility) + '\n';
    }
    return out;
}

/// Per-state stationary probabilities; one column per class and population.
inline std::string steady_state_csv(const SteadyStateSolution& solution) {
    const std::size_t K =
        solution.states.empty() ? 0 : solution.states.front().local_counts.size();
    std::string out;
    for (std::size_t k = 1; k <= K; ++k) out += "n_l_" + std::to_string(k) + ',';
    for (std::size_t k = 1; k <= K; ++k) out += "n_g_" + std::to_string(k) + ',';
    out += "pi\n";
    for (std::size_t s = 0; s < solution.states.size(); ++s) {
        for (int n : solution.states[s].local_counts) out += std::to_string(n) + ',';
        for (int n : solution.states[s].migrated_counts) out += std::to_string(n) + ',';
        out += number(solution.probabilities[s]) + '\n';
    }
    return out;
}

inline std::string rates_csv(const SteadyStateSolution& solution) {
    std::string out = "metric,value\n";
    out += "blocking_rate," + number(solution.blocking_rate) + '\n';
    out += "blocking_probability," + number(solution.blocking_probability) + '\n';
    out += "dropping_rate," + number(solution.dropping_rate) + '\n';
    out += "dropping_probability," + number(solution.dropping_probability) + '\n';
    out += "states," + std::to_string(solution.states.size()) + '\n';
    return out;
}

inline std::string grid_csv(const reservation::ReservationPlan& plan) {
    std::string out =
        "compute_reserved,storage_reserved,blocking_rate,blocking_probability,dropping_rate,"
        "dropping_probability,states,feasible,chosen\n";
    for (std::size_t i = 0; i < plan.table.size(); ++i) {
        const reservation::GridCandidate& c = plan.table[i];
        const bool chosen = plan.feasible && i == plan.best_index;
        out += number(c.compute_reserved) + ',' + number(c.storage_reserved) + ',' +
               number(c.blocking_rate) + ',' + number(c.blocking_probability) + ',' +
               number(c.dropping_rate) + ',' + number(c.dropping_probability) + ',' +
               std::to_string(c.state_count) + ',' + (c.feasible ? "1" : "0") + ',' +
               (chosen ? "1" : "0") + '\n';
    }
    return out;
}

/// One wide row keyed by the configuration hash and master seed.
inline std::string sim_report_csv(const sim::SimReport& report, const std::string& config_hash) {
    std::string out =
        "config_hash,seed,replications,blocking_probability,blocking_probability_hw,"
        "dropping_probability,dropping_probability_hw,blocking_rate,blocking_rate_hw,"
        "dropping_rate,dropping_rate_hw,compute_utilization,compute_utilization_hw,"
        "storage_utilization,storage_utilization_hw,inter_cloudlet,intra_cloudlet_handoff,"
        "to_vehicular_cloud,to_central_cloud\n";
    auto est = [&](const Estimate& e) { return number(e.mean) + ',' + number(e.ci_half_width); };
    out += config_hash + ',' + std::to_string(report.seed) + ',' +
           std::to_string(report.replications) + ',' + est(report.blocking_probability) + ',' +
           est(report.dropping_probability) + ',' + est(report.blocking_rate) + ',' +
           est(report.dropping_rate) + ',' + est(report.compute_utilization) + ',' +
           est(report.storage_utilization) + ',' + number(report.scenarios.inter_cloudlet) +
           ',' + number(report.scenarios.intra_cloudlet_handoff) + ',' +
           number(report.scenarios.to_vehicular_cloud) + ',' +
           number(report.scenarios.to_central_cloud) + '\n';
    return out;
}

inline std::string events_csv(const std::vector<sim::EventRecord>& log) {
    std::string out = "time,kind,class,outcome,cloudlet,vehicle_id\n";
    for (const sim::EventRecord& e : log) {
        out += number(e.time) + ',' + sim::to_string(e.kind) + ',' +
               std::to_string(e.class_index) + ',' + sim::to_string(e.outcome) + ',' +
               std::to_string(e.cloudlet) + ',' + std::to_string(e.vehicle) + '\n';
    }
    return out;
}

inline std::string comparison_csv(const std::vector<sim::ComparisonRow>& rows) {
    std::string out = "metric,analytic,simulated,ci_half_width,within_ci\n";
    for (const sim::ComparisonRow& r : rows) {
        out += r.metric + ',' + number(r.analytic) + ',' + number(r.simulated) + ',' +
               number(r.ci_half_width) + ',' + (r.within_ci ? "1" : "0") + '\n';
    }
    return out;
}

} // namespace roadcloud::csv
