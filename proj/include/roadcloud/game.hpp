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
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadcloud/model.hpp"

namespace roadcloud::game {

namespace detail {

inline void check_requests(std::span<const double> requests, double total, const char* what) {
    for (double r : requests) {
        if (!(r > 0.0 && r <= total)) {
            throw std::invalid_argument(std::string(what) +
                                        " requests must lie in (0, total]");
        }
    }
}

inline double sum_excluding(std::span<const double> values, std::size_t skip) {
    double sum = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (j != skip) sum += values[j];
    }
    return sum;
}

} // namespace detail

/// Payoff of one player given the full request profile: weighted
/// proportional shares of both pools minus the price of the requests.
/// With a single player the fractional terms reduce to the full pools.
inline double utility(std::size_t player, std::span<const double> requests_compute,
                      std::span<const double> requests_storage, const GameConfig& cfg) {
    const std::size_t n = cfg.players.size();
    if (player >= n) {
        throw std::out_of_range("utility: player index out of range");
    }
    if (requests_compute.size() != n || requests_storage.size() != n) {
        throw std::invalid_argument("utility: request vectors must have one entry per player");
    }
    detail::check_requests(requests_compute, cfg.capacity.compute_total, "compute");
    detail::check_requests(requests_storage, cfg.capacity.storage_total, "storage");

    const VmGameParams& p = cfg.players[player];
    const double c_i = requests_compute[player];
    const double m_i = requests_storage[player];
    const double c_others = detail::sum_excluding(requests_compute, player);
    const double m_others = detail::sum_excluding(requests_storage, player);
    const double compute_share = c_i * cfg.capacity.compute_total / (c_i + c_others);
    const double storage_share = m_i * cfg.capacity.storage_total / (m_i + m_others);
    return p.alpha * compute_share + p.beta * storage_share -
           (p.price_compute * c_i + p.price_storage * m_i);
}

struct BestResponse {
    double compute = 0.0;
    double storage = 0.0;
};

namespace detail {

// sqrt(weight/price * others * total) - others, capped at the pool size and
// floored at the smallest admissible request. Works through the weight/price
// ratio so that scaling both by a common factor cannot perturb the result.
// others == 0 makes the raw expression 0, which lands on the floor.
inline double best_response_1d(double weight, double price, double others, double total,
                               double floor) {
    const double ratio = weight / price;
    const double raw = others > 0.0 ? std::sqrt(ratio * others * total) - others : 0.0;
    return std::clamp(std::min(total, raw), floor, total);
}

} // namespace detail

/// Utility-maximizing request of one player against fixed aggregate
/// requests of the others, clamped to [request_floor, pool size].
inline BestResponse best_response(std::size_t player, double others_compute_sum,
                                  double others_storage_sum, const GameConfig& cfg) {
    if (player >= cfg.players.size()) {
        throw std::out_of_range("best_response: player index out of range");
    }
    if (others_compute_sum < 0.0 || others_storage_sum < 0.0) {
        throw std::invalid_argument("best_response: aggregate requests must be >= 0");
    }
    const VmGameParams& p = cfg.players[player];
    return BestResponse{
        detail::best_response_1d(p.alpha, p.price_compute, others_compute_sum,
                                 cfg.capacity.compute_total, cfg.request_floor),
        detail::best_response_1d(p.beta, p.price_storage, others_storage_sum,
                                 cfg.capacity.storage_total, cfg.request_floor)};
}

struct UniquenessViolation {
    std::size_t player = 0;
    bool compute_condition_failed = false;  // alpha  < 4(N-1) * price_compute
    bool storage_condition_failed = false;  // beta   < 4(N-1) * price_storage
};

struct UniquenessReport {
    bool holds = true;
    std::vector<UniquenessViolation> violations;
};

/// Sufficient conditions for a unique Nash equilibrium:
/// alpha_i >= 4(N-1) lambda_i and beta_i >= 4(N-1) gamma_i for every i
/// (boundary inclusive). Trivially satisfied for a single player.
inline UniquenessReport check_uniqueness(const GameConfig& cfg) {
    UniquenessReport report;
    const double factor = 4.0 * static_cast<double>(cfg.players.size() - 1);
    for (std::size_t i = 0; i < cfg.players.size(); ++i) {
        const VmGameParams& p = cfg.players[i];
        UniquenessViolation v{i, !(p.alpha >= factor * p.price_compute),
                              !(p.beta >= factor * p.price_storage)};
        if (v.compute_condition_failed || v.storage_condition_failed) {
            report.holds = false;
            report.violations.push_back(v);
        }
    }
    return report;
}

/// Shares each player total * request_i / sum(requests).
inline std::vector<double> allocate_shares(std::span<const double> requests, double total) {
    if (requests.empty()) {
        throw std::invalid_argument("allocate_shares: empty request vector");
    }
    double sum = 0.0;
    for (double r : requests) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("allocate_shares: requests must be > 0");
        }
        sum += r;
    }
    std::vector<double> shares(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        shares[i] = requests[i] * total / sum;
    }
    return shares;
}

/// One row of the best-response trajectory, recorded after a player update.
struct TraceRow {
    int round = 0;
    std::size_t player = 0;
    double request_compute = 0.0;
    double request_storage = 0.0;
    double share_compute = 0.0;
    double share_storage = 0.0;
    double utility = 0.0;
};

/// Runs best-response iteration from the given starting requests until the
/// largest per-player change in a full round drops to
/// tolerance * max(C, M), or max_iterations rounds have run. Sequential
/// (Gauss-Seidel) sweeps by default; the simultaneous mode recomputes every
/// player from the previous round's profile. Non-convergence is reported
/// through the flag, not an error.
inline AllocationProfile solve_nash(const GameConfig& cfg, std::vector<double> requests_compute,
                                    std::vector<double> requests_storage,
                                    std::vector<TraceRow>* trace = nullptr) {
    const std::size_t n = cfg.players.size();
    if (requests_compute.size() != n || requests_storage.size() != n) {
        throw std::invalid_argument("solve_nash: initial vectors must have one entry per player");
    }
    detail::check_requests(requests_compute, cfg.capacity.compute_total, "compute");
    detail::check_requests(requests_storage, cfg.capacity.storage_total, "storage");

    const double threshold =
        cfg.tolerance * std::max(cfg.capacity.compute_total, cfg.capacity.storage_total);

    auto record = [&](int round, std::size_t i) {
        if (!trace) return;
        TraceRow row;
        row.round = round;
        row.player = i;
        row.request_compute = requests_compute[i];
        row.request_storage = requests_storage[i];
        row.share_compute = allocate_shares(requests_compute, cfg.capacity.compute_total)[i];
        row.share_storage = allocate_shares(requests_storage, cfg.capacity.storage_total)[i];
        row.utility = utility(i, requests_compute, requests_storage, cfg);
        trace->push_back(row);
    };

    AllocationProfile profile;
    profile.converged = false;
    int rounds_run = 0;
    for (int round = 1; round <= cfg.max_iterations; ++round) {
        rounds_run = round;
        double max_delta = 0.0;
        if (cfg.update_order == UpdateOrder::sequential) {
            for (std::size_t i = 0; i < n; ++i) {
                const double others_c = detail::sum_excluding(requests_compute, i);
                const double others_m = detail::sum_excluding(requests_storage, i);
                const BestResponse br = best_response(i, others_c, others_m, cfg);
                max_delta = std::max(max_delta, std::abs(br.compute - requests_compute[i]));
                max_delta = std::max(max_delta, std::abs(br.storage - requests_storage[i]));
                requests_compute[i] = br.compute;
                requests_storage[i] = br.storage;
                record(round, i);
            }
        } else {
            std::vector<double> next_c(n), next_m(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double others_c = detail::sum_excluding(requests_compute, i);
                const double others_m = detail::sum_excluding(requests_storage, i);
                const BestResponse br = best_response(i, others_c, others_m, cfg);
                next_c[i] = br.compute;
                next_m[i] = br.storage;
                max_delta = std::max(max_delta, std::abs(br.compute - requests_compute[i]));
                max_delta = std::max(max_delta, std::abs(br.storage - requests_storage[i]));
            }
            requests_compute = std::move(next_c);
            requests_storage = std::move(next_m);
            for (std::size_t i = 0; i < n; ++i) record(round, i);
        }
        if (max_delta <= threshold) {
            profile.converged = true;
            break;
        }
    }

    profile.iterations_used = rounds_run;
    profile.shares_compute = allocate_shares(requests_compute, cfg.capacity.compute_total);
    profile.shares_storage = allocate_shares(requests_storage, cfg.capacity.storage_total);
    profile.requests_compute = std::move(requests_compute);
    profile.requests_storage = std::move(requests_storage);
    return profile;
}

/// Default starting profile: an equal split of each pool.
inline std::vector<double> default_initial(std::size_t players, double total) {
    return std::vector<double>(players, total / static_cast<double>(players));
}

inline AllocationProfile solve_nash(const GameConfig& cfg, std::vector<TraceRow>* trace = nullptr) {
    auto c0 = cfg.initial_compute.empty()
                  ? default_initial(cfg.players.size(), cfg.capacity.compute_total)
                  : cfg.initial_compute;
    auto m0 = cfg.initial_storage.empty()
                  ? default_initial(cfg.players.size(), cfg.capacity.storage_total)
                  : cfg.initial_storage;
    return solve_nash(cfg, std::move(c0), std::move(m0), trace);
}

struct VrcDecision {
    bool compute_admitted = false;
    bool storage_admitted = false;
};

/// Applies one grant against the fairness counters. A resource type is
/// admitted only while the player's counter is strictly below the cap; the
/// counter then grows by the grant. Once every player has reached the cap
/// for a type, the next call resets that type's counters and a new fairness
/// window begins.
inline VrcDecision vrc_admit_and_update(VrcState& state, std::size_t player,
                                        double granted_compute, double granted_storage) {
    if (player >= state.applied_compute.size() || player >= state.applied_storage.size()) {
        throw std::out_of_range("vrc_admit_and_update: player index out of range");
    }
    if (granted_compute < 0.0 || granted_storage < 0.0) {
        throw std::invalid_argument("vrc_admit_and_update: grants must be >= 0");
    }
    auto reset_if_all_capped = [](std::vector<double>& counters, double cap) {
        const bool all_capped =
            std::all_of(counters.begin(), counters.end(), [cap](double c) { return c >= cap; });
        if (all_capped) {
            std::fill(counters.begin(), counters.end(), 0.0);
        }
    };
    reset_if_all_capped(state.applied_compute, state.cap_compute);
    reset_if_all_capped(state.applied_storage, state.cap_storage);

    VrcDecision decision{state.applied_compute[player] < state.cap_compute,
                         state.applied_storage[player] < state.cap_storage};
    if (decision.compute_admitted) state.applied_compute[player] += granted_compute;
    if (decision.storage_admitted) state.applied_storage[player] += granted_storage;
    return decision;
}

/// Default fairness-window caps: 100 whole pools of each resource.
inline VrcState make_vrc_state(std::size_t players, const Capacity& cap) {
    VrcState state;
    state.applied_compute.assign(players, 0.0);
    state.applied_storage.assign(players, 0.0);
    state.cap_compute = 100.0 * cap.compute_total;
    state.cap_storage = 100.0 * cap.storage_total;
    return state;
}

} // namespace roadcloud::game
