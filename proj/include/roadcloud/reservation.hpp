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
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "roadcloud/model.hpp"

namespace roadcloud::reservation {

class StateSpaceOverflow : public std::runtime_error {
public:
    StateSpaceOverflow(std::size_t cap, std::size_t partial_count)
        : std::runtime_error("state space exceeds the cap of " + std::to_string(cap) +
                             " states (enumeration stopped after " +
                             std::to_string(partial_count) + ")"),
          cap_(cap),
          partial_count_(partial_count) {}

    std::size_t cap() const { return cap_; }
    std::size_t partial_count() const { return partial_count_; }

private:
    std::size_t cap_;
    std::size_t partial_count_;
};

class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

/// Departure rates scale with the resident population: a class with n
/// resident VMs departs at rate n * mu.
enum class DepartureSemantics { per_vm };

/// Loss-network model: VM classes with Poisson arrivals and per-VM
/// exponential lifetimes over a reserved / common capacity split.
struct RateModel {
    std::vector<VmClassSpec> classes;
    Capacity capacity;
    std::size_t state_cap = 2'000'000;
    DepartureSemantics departure_semantics = DepartureSemantics::per_vm;
};

inline void validate(const RateModel& model, const std::string& path = "classes") {
    roadcloud::validate(model.capacity, "capacity");
    if (model.classes.empty()) {
        roadcloud::detail::fail(path, "contain at least one class");
    }
    for (std::size_t k = 0; k < model.classes.size(); ++k) {
        roadcloud::validate(model.classes[k], path + "[" + std::to_string(k) + "]");
    }
    if (model.state_cap == 0) {
        roadcloud::detail::fail("simulation.state_cap", "be >= 1");
    }
}

inline RateModel with_reservation(RateModel model, double compute_reserved,
                                  double storage_reserved) {
    model.capacity.compute_reserved = compute_reserved;
    model.capacity.storage_reserved = storage_reserved;
    return model;
}

// -- state space -------------------------------------------------------------

/// Resource sums of one state, cached for admission tests.
struct StateSums {
    double local_compute = 0.0;
    double local_storage = 0.0;
    double total_compute = 0.0;
    double total_storage = 0.0;
};

inline std::vector<StateSums> state_sums(const std::vector<OccupancyState>& states,
                                         const std::vector<VmClassSpec>& classes) {
    std::vector<StateSums> sums(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
        StateSums& acc = sums[s];
        for (std::size_t k = 0; k < classes.size(); ++k) {
            const double n_l = states[s].local_counts[k];
            const double n_g = states[s].migrated_counts[k];
            acc.local_compute += n_l * classes[k].compute_req;
            acc.local_storage += n_l * classes[k].storage_req;
            acc.total_compute += (n_l + n_g) * classes[k].compute_req;
            acc.total_storage += (n_l + n_g) * classes[k].storage_req;
        }
    }
    return sums;
}

/// A local VM of class k is admitted at s only if the grown state is still
/// feasible: the local VMs fit the common resources and everything fits the
/// full resources. The second part matters when migrated VMs spill beyond
/// the reserved share into the common pool.
inline bool local_arrival_admissible(const StateSums& s, const VmClassSpec& k,
                                     const Capacity& cap) {
    return s.local_compute + k.compute_req <= cap.compute_common() &&
           s.local_storage + k.storage_req <= cap.storage_common() &&
           s.total_compute + k.compute_req <= cap.compute_total &&
           s.total_storage + k.storage_req <= cap.storage_total;
}

/// A migrated VM of class k is admitted at s only if all VMs including it
/// fit the full resources.
inline bool migrated_arrival_admissible(const StateSums& s, const VmClassSpec& k,
                                        const Capacity& cap) {
    return s.total_compute + k.compute_req <= cap.compute_total &&
           s.total_storage + k.storage_req <= cap.storage_total;
}

/// Enumerates every reachable occupancy state in lexicographic order of
/// (local_counts, migrated_counts). A population whose arrival and
/// departure rates are both zero can never hold a VM and is pinned at
/// count zero; populations with departures only still contribute their
/// transient states. Throws StateSpaceOverflow beyond model.state_cap.
inline std::vector<OccupancyState> enumerate_states(const RateModel& model) {
    validate(model);
    const std::size_t K = model.classes.size();
    const Capacity& cap = model.capacity;

    std::vector<bool> local_active(K), migrated_active(K);
    for (std::size_t k = 0; k < K; ++k) {
        const VmClassSpec& c = model.classes[k];
        local_active[k] = c.local_arrival_rate > 0.0 || c.local_departure_rate > 0.0;
        migrated_active[k] = c.migrated_arrival_rate > 0.0 || c.migrated_departure_rate > 0.0;
    }

    std::vector<OccupancyState> states;
    OccupancyState current;
    current.local_counts.assign(K, 0);
    current.migrated_counts.assign(K, 0);

    // Positions 0..K-1 pick local counts under the common-resource budget;
    // positions K..2K-1 pick migrated counts under the remaining full budget.
    auto recurse = [&](auto&& self, std::size_t pos, double local_c, double local_m,
                       double total_c, double total_m) -> void {
        if (pos == 2 * K) {
            states.push_back(current);
            if (states.size() > model.state_cap) {
                throw StateSpaceOverflow(model.state_cap, states.size() - 1);
            }
            return;
        }
        const bool local_phase = pos < K;
        const std::size_t k = local_phase ? pos : pos - K;
        const VmClassSpec& spec = model.classes[k];
        const bool active = local_phase ? local_active[k] : migrated_active[k];
        for (int count = 0;; ++count) {
            const double v = static_cast<double>(count);
            const double add_c = v * spec.compute_req;
            const double add_m = v * spec.storage_req;
            if (local_phase) {
                if (local_c + add_c > cap.compute_common() ||
                    local_m + add_m > cap.storage_common()) {
                    break;
                }
                current.local_counts[k] = count;
                self(self, pos + 1, local_c + add_c, local_m + add_m, total_c + add_c,
                     total_m + add_m);
                current.local_counts[k] = 0;
            } else {
                if (total_c + add_c > cap.compute_total || total_m + add_m > cap.storage_total) {
                    break;
                }
                current.migrated_counts[k] = count;
                self(self, pos + 1, local_c, local_m, total_c + add_c, total_m + add_m);
                current.migrated_counts[k] = 0;
            }
            if (!active) {
                break;  // inert population stays at zero
            }
        }
    };
    recurse(recurse, 0, 0.0, 0.0, 0.0, 0.0);

#ifndef NDEBUG
    for (const OccupancyState& s : states) {
        assert(occupancy_feasible(s, model.classes, model.capacity));
    }
#endif
    return states;
}

// -- generator ---------------------------------------------------------------

/// Sparse CTMC generator; the diagonal is kept separately and always equals
/// minus the row sum of the off-diagonal rates.
struct Generator {
    struct Entry {
        std::int32_t target = 0;
        double rate = 0.0;
    };
    std::vector<std::vector<Entry>> transitions;
    std::vector<double> diagonal;

    std::size_t size() const { return diagonal.size(); }

    double max_abs_entry() const {
        double m = 0.0;
        for (double d : diagonal) m = std::max(m, std::abs(d));
        return m;
    }
};

namespace detail {

struct CountsHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (int x : v) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

inline std::vector<int> flatten(const OccupancyState& s) {
    std::vector<int> key(s.local_counts);
    key.insert(key.end(), s.migrated_counts.begin(), s.migrated_counts.end());
    return key;
}

} // namespace detail

/// Transition rates of the reservation scheme: admissible local/migrated
/// arrivals at their Poisson rates, departures at count * mu. Inadmissible
/// arrivals produce no transition (the request is blocked or dropped).
inline Generator build_generator(const RateModel& model,
                                 const std::vector<OccupancyState>& states) {
    const std::size_t K = model.classes.size();
    const std::vector<StateSums> sums = state_sums(states, model.classes);

    std::unordered_map<std::vector<int>, std::int32_t, detail::CountsHash> index;
    index.reserve(states.size() * 2);
    for (std::size_t s = 0; s < states.size(); ++s) {
        index.emplace(detail::flatten(states[s]), static_cast<std::int32_t>(s));
    }
    auto lookup = [&](std::vector<int>& key) {
        const auto it = index.find(key);
        assert(it != index.end());
        return it->second;
    };

    Generator gen;
    gen.transitions.resize(states.size());
    gen.diagonal.assign(states.size(), 0.0);

    std::vector<int> key;
    for (std::size_t s = 0; s < states.size(); ++s) {
        double out_rate = 0.0;
        auto add = [&](std::int32_t target, double rate) {
            gen.transitions[s].push_back({target, rate});
            out_rate += rate;
        };
        key = detail::flatten(states[s]);
        for (std::size_t k = 0; k < K; ++k) {
            const VmClassSpec& spec = model.classes[k];
            const int n_l = states[s].local_counts[k];
            const int n_g = states[s].migrated_counts[k];
            if (spec.local_arrival_rate > 0.0 &&
                local_arrival_admissible(sums[s], spec, model.capacity)) {
                key[k] = n_l + 1;
                add(lookup(key), spec.local_arrival_rate);
                key[k] = n_l;
            }
            if (spec.migrated_arrival_rate > 0.0 &&
                migrated_arrival_admissible(sums[s], spec, model.capacity)) {
                key[K + k] = n_g + 1;
                add(lookup(key), spec.migrated_arrival_rate);
                key[K + k] = n_g;
            }
            if (n_l > 0 && spec.local_departure_rate > 0.0) {
                key[k] = n_l - 1;
                add(lookup(key), n_l * spec.local_departure_rate);
                key[k] = n_l;
            }
            if (n_g > 0 && spec.migrated_departure_rate > 0.0) {
                key[K + k] = n_g - 1;
                add(lookup(key), n_g * spec.migrated_departure_rate);
                key[K + k] = n_g;
            }
        }
        gen.diagonal[s] = -out_rate;
    }
    return gen;
}

// -- steady state ------------------------------------------------------------

struct SolveOptions {
    double residual_tolerance = 1e-9;  // relative to the largest |Q| entry
    std::size_t dense_limit = 10'000;  // direct solve up to here, power iteration above
    std::size_t max_power_iterations = 2'000'000;
};

namespace detail {

inline std::vector<std::int32_t> reachable_from_empty(const Generator& gen) {
    std::vector<char> seen(gen.size(), 0);
    std::deque<std::int32_t> frontier;
    frontier.push_back(0);
    seen[0] = 1;
    std::vector<std::int32_t> component;
    while (!frontier.empty()) {
        const std::int32_t s = frontier.front();
        frontier.pop_front();
        component.push_back(s);
        for (const Generator::Entry& e : gen.transitions[s]) {
            if (!seen[e.target] && e.rate > 0.0) {
                seen[e.target] = 1;
                frontier.push_back(e.target);
            }
        }
    }
    std::sort(component.begin(), component.end());
    return component;
}

// Gaussian elimination with partial pivoting on Q^T restricted to the
// reachable component, with the last balance equation replaced by the
// normalization constraint.
inline std::vector<double> solve_dense(const Generator& gen,
                                       const std::vector<std::int32_t>& component) {
    const std::size_t n = component.size();
    std::vector<std::int32_t> position(gen.size(), -1);
    for (std::size_t i = 0; i < n; ++i) {
        position[component[i]] = static_cast<std::int32_t>(i);
    }

    std::vector<double> a(n * n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        const std::int32_t s = component[col];
        a[static_cast<std::size_t>(position[s]) * n + col] += gen.diagonal[s];
        for (const Generator::Entry& e : gen.transitions[s]) {
            const std::int32_t row = position[e.target];
            assert(row >= 0);
            a[static_cast<std::size_t>(row) * n + col] += e.rate;
        }
    }
    std::vector<double> b(n, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        a[(n - 1) * n + col] = 1.0;
    }
    b[n - 1] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double mag = std::abs(a[r * n + col]);
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (best == 0.0) {
            throw SolveError("steady-state system is singular", 0.0);
        }
        if (pivot != col) {
            for (std::size_t c = col; c < n; ++c) {
                std::swap(a[pivot * n + c], a[col * n + c]);
            }
            std::swap(b[pivot], b[col]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r * n + col] * inv;
            if (factor == 0.0) continue;
            a[r * n + col] = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) {
                a[r * n + c] -= factor * a[col * n + c];
            }
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) {
            acc -= a[ri * n + c] * x[c];
        }
        x[ri] = acc / a[ri * n + ri];
    }
    return x;
}

// Uniformization: pi <- pi (I + Q / Lambda), which converges to the
// stationary distribution for the reachable component.
inline std::vector<double> solve_power(const Generator& gen,
                                       const std::vector<std::int32_t>& component,
                                       const SolveOptions& options) {
    const std::size_t n = component.size();
    std::vector<std::int32_t> position(gen.size(), -1);
    for (std::size_t i = 0; i < n; ++i) {
        position[component[i]] = static_cast<std::int32_t>(i);
    }
    double lambda = 0.0;
    for (const std::int32_t s : component) {
        lambda = std::max(lambda, std::abs(gen.diagonal[s]));
    }
    if (lambda == 0.0) {
        return std::vector<double>(n, 1.0 / static_cast<double>(n));
    }
    lambda *= 1.05;

    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    const double abs_tol = options.residual_tolerance * gen.max_abs_entry();
    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < options.max_power_iterations; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::int32_t s = component[i];
            next[i] += pi[i] * (1.0 + gen.diagonal[s] / lambda);
            for (const Generator::Entry& e : gen.transitions[s]) {
                next[static_cast<std::size_t>(position[e.target])] += pi[i] * e.rate / lambda;
            }
        }
        double sum = 0.0;
        for (double v : next) sum += v;
        for (double& v : next) v /= sum;
        pi.swap(next);
        if (iter % 64 == 63 || iter + 1 == options.max_power_iterations) {
            residual = 0.0;
            std::vector<double> flow(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const std::int32_t s = component[i];
                flow[i] += pi[i] * gen.diagonal[s];
                for (const Generator::Entry& e : gen.transitions[s]) {
                    flow[static_cast<std::size_t>(position[e.target])] += pi[i] * e.rate;
                }
            }
            for (double f : flow) residual = std::max(residual, std::abs(f));
            if (residual <= abs_tol) {
                return pi;
            }
        }
    }
    throw SolveError("power iteration did not reach the residual tolerance", residual);
}

} // namespace detail

/// Stationary distribution of the generator: solves pi Q = 0 with
/// sum(pi) = 1 on the component reachable from the empty state; states
/// outside it receive probability zero. Direct solve at small sizes, power
/// iteration on the uniformized chain above dense_limit.
inline std::vector<double> solve_steady_state(const Generator& gen,
                                              const SolveOptions& options = {}) {
    if (gen.size() == 0) {
        throw std::invalid_argument("solve_steady_state: empty state space");
    }
    const std::vector<std::int32_t> component = detail::reachable_from_empty(gen);
    std::vector<double> local = component.size() <= options.dense_limit
                                    ? detail::solve_dense(gen, component)
                                    : detail::solve_power(gen, component, options);

    std::vector<double> pi(gen.size(), 0.0);
    for (std::size_t i = 0; i < component.size(); ++i) {
        pi[component[i]] = local[i];
    }
    double sum = 0.0;
    for (double& p : pi) {
        if (p < 0.0) {
            if (p < -1e-8) {
                throw SolveError("steady-state solve produced a negative probability", p);
            }
            p = 0.0;
        }
        sum += p;
    }
    for (double& p : pi) p /= sum;

    // residual check ||pi Q||_inf against the tolerance
    std::vector<double> flow(gen.size(), 0.0);
    for (std::size_t s = 0; s < gen.size(); ++s) {
        if (pi[s] == 0.0) continue;
        flow[s] += pi[s] * gen.diagonal[s];
        for (const Generator::Entry& e : gen.transitions[s]) {
            flow[e.target] += pi[s] * e.rate;
        }
    }
    double residual = 0.0;
    for (double f : flow) residual = std::max(residual, std::abs(f));
    const double limit = options.residual_tolerance * std::max(gen.max_abs_entry(), 1e-300);
    if (residual > limit) {
        throw SolveError("steady-state residual above tolerance", residual);
    }
    return pi;
}

// -- blocking and dropping ---------------------------------------------------

/// blocking_set[k][s] is 1 when a class-k local arrival is inadmissible at
/// state s; dropping_set analogously for migrated arrivals.
inline std::vector<std::vector<char>> blocking_sets(const RateModel& model,
                                                    const std::vector<OccupancyState>& states) {
    const std::vector<StateSums> sums = state_sums(states, model.classes);
    std::vector<std::vector<char>> sets(model.classes.size());
    for (std::size_t k = 0; k < model.classes.size(); ++k) {
        sets[k].resize(states.size());
        for (std::size_t s = 0; s < states.size(); ++s) {
            sets[k][s] = !local_arrival_admissible(sums[s], model.classes[k], model.capacity);
        }
    }
    return sets;
}

inline std::vector<std::vector<char>> dropping_sets(const RateModel& model,
                                                    const std::vector<OccupancyState>& states) {
    const std::vector<StateSums> sums = state_sums(states, model.classes);
    std::vector<std::vector<char>> sets(model.classes.size());
    for (std::size_t k = 0; k < model.classes.size(); ++k) {
        sets[k].resize(states.size());
        for (std::size_t s = 0; s < states.size(); ++s) {
            sets[k][s] = !migrated_arrival_admissible(sums[s], model.classes[k], model.capacity);
        }
    }
    return sets;
}

/// R_b: steady-state rate at which local VM requests are denied.
inline double blocking_rate(const std::vector<double>& pi,
                            const std::vector<OccupancyState>& states, const RateModel& model) {
    const auto sets = blocking_sets(model, states);
    double rate = 0.0;
    for (std::size_t k = 0; k < model.classes.size(); ++k) {
        double mass = 0.0;
        for (std::size_t s = 0; s < states.size(); ++s) {
            if (sets[k][s]) mass += pi[s];
        }
        rate += mass * model.classes[k].local_arrival_rate;
    }
    return rate;
}

/// R_d: steady-state rate at which migrated VM requests are denied.
inline double dropping_rate(const std::vector<double>& pi,
                            const std::vector<OccupancyState>& states, const RateModel& model) {
    const auto sets = dropping_sets(model, states);
    double rate = 0.0;
    for (std::size_t k = 0; k < model.classes.size(); ++k) {
        double mass = 0.0;
        for (std::size_t s = 0; s < states.size(); ++s) {
            if (sets[k][s]) mass += pi[s];
        }
        rate += mass * model.classes[k].migrated_arrival_rate;
    }
    return rate;
}

inline double total_local_arrival_rate(const RateModel& model) {
    double sum = 0.0;
    for (const VmClassSpec& c : model.classes) sum += c.local_arrival_rate;
    return sum;
}

inline double total_migrated_arrival_rate(const RateModel& model) {
    double sum = 0.0;
    for (const VmClassSpec& c : model.classes) sum += c.migrated_arrival_rate;
    return sum;
}

/// Full pipeline: enumerate, build, solve, and attach blocking/dropping
/// rates and their arrival-rate-normalized probabilities.
inline SteadyStateSolution analyze(const RateModel& model, const SolveOptions& options = {}) {
    SteadyStateSolution solution;
    solution.states = enumerate_states(model);
    const Generator gen = build_generator(model, solution.states);
    solution.probabilities = solve_steady_state(gen, options);
    solution.blocking_rate = blocking_rate(solution.probabilities, solution.states, model);
    solution.dropping_rate = dropping_rate(solution.probabilities, solution.states, model);
    const double local_rate = total_local_arrival_rate(model);
    const double migrated_rate = total_migrated_arrival_rate(model);
    solution.blocking_probability = local_rate > 0.0 ? solution.blocking_rate / local_rate : 0.0;
    solution.dropping_probability =
        migrated_rate > 0.0 ? solution.dropping_rate / migrated_rate : 0.0;
    return solution;
}

// -- reservation optimization -------------------------------------------------

struct GridCandidate {
    double compute_reserved = 0.0;
    double storage_reserved = 0.0;
    double blocking_rate = 0.0;
    double blocking_probability = 0.0;
    double dropping_rate = 0.0;
    double dropping_probability = 0.0;
    std::size_t state_count = 0;
    bool feasible = false;  // blocking_rate <= constraint
};

struct ReservationPlan {
    bool feasible = false;
    std::size_t best_index = 0;  // into table; meaningful only when feasible
    double blocking_constraint = 0.0;
    std::vector<GridCandidate> table;

    const GridCandidate& best() const { return table.at(best_index); }
};

/// Exhaustively evaluates the candidate reservations and picks the one
/// minimizing the dropping rate subject to blocking_rate <= constraint.
/// Ties break toward smaller compute then storage reservations. When no
/// candidate satisfies the constraint the plan is marked infeasible and the
/// full table is still returned.
inline ReservationPlan optimize_reservation(const RateModel& base, double blocking_constraint,
                                            const std::vector<std::pair<double, double>>& grid,
                                            const SolveOptions& options = {}) {
    if (grid.empty()) {
        throw std::invalid_argument("optimize_reservation: empty candidate grid");
    }
    ReservationPlan plan;
    plan.blocking_constraint = blocking_constraint;
    plan.table.reserve(grid.size());
    for (const auto& [cr, mr] : grid) {
        const RateModel candidate_model = with_reservation(base, cr, mr);
        validate(candidate_model);  // rejects candidates that empty the common pool
        const SteadyStateSolution sol = analyze(candidate_model, options);
        GridCandidate c;
        c.compute_reserved = cr;
        c.storage_reserved = mr;
        c.blocking_rate = sol.blocking_rate;
        c.blocking_probability = sol.blocking_probability;
        c.dropping_rate = sol.dropping_rate;
        c.dropping_probability = sol.dropping_probability;
        c.state_count = sol.states.size();
        c.feasible = sol.blocking_rate <= blocking_constraint;
        plan.table.push_back(c);
    }
    auto better = [](const GridCandidate& a, const GridCandidate& b) {
        if (a.dropping_rate != b.dropping_rate) return a.dropping_rate < b.dropping_rate;
        if (a.compute_reserved != b.compute_reserved)
            return a.compute_reserved < b.compute_reserved;
        return a.storage_reserved < b.storage_reserved;
    };
    for (std::size_t i = 0; i < plan.table.size(); ++i) {
        if (!plan.table[i].feasible) continue;
        if (!plan.feasible || better(plan.table[i], plan.table[plan.best_index])) {
            plan.feasible = true;
            plan.best_index = i;
        }
    }
    return plan;
}

} // namespace roadcloud::reservation
