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
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "roadcloud/model.hpp"
#include "roadcloud/reservation.hpp"
#include "roadcloud/rng.hpp"
#include "roadcloud/stats.hpp"

namespace roadcloud::sim {

enum class EventKind {
    local_arrival,
    local_departure,
    migrated_arrival,
    migrated_departure,
    handoff_no_migration
};

enum class EventOutcome { admitted, blocked, dropped, completed };

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::local_arrival: return "local_arrival";
        case EventKind::local_departure: return "local_departure";
        case EventKind::migrated_arrival: return "migrated_arrival";
        case EventKind::migrated_departure: return "migrated_departure";
        case EventKind::handoff_no_migration: return "handoff_no_migration";
    }
    return "?";
}

inline const char* to_string(EventOutcome o) {
    switch (o) {
        case EventOutcome::admitted: return "admitted";
        case EventOutcome::blocked: return "blocked";
        case EventOutcome::dropped: return "dropped";
        case EventOutcome::completed: return "completed";
    }
    return "?";
}

struct EventRecord {
    double time = 0.0;
    EventKind kind = EventKind::local_arrival;
    int class_index = 0;
    EventOutcome outcome = EventOutcome::admitted;
    int cloudlet = -1;
    long vehicle = -1;
};

struct ScenarioCounts {
    long inter_cloudlet = 0;
    long intra_cloudlet_handoff = 0;
    long to_vehicular_cloud = 0;
    long to_central_cloud = 0;
};

/// Whole-run admission accounting of one replication, kept for flow
/// conservation checks: admitted = departed + resident at the horizon.
struct ReplicationTally {
    long local_arrivals = 0;
    long local_admitted = 0;
    long local_blocked = 0;
    long local_departed = 0;
    long local_resident = 0;
    long migrated_arrivals = 0;
    long migrated_admitted = 0;
    long migrated_dropped = 0;
    long migrated_departed = 0;
    long migrated_resident = 0;
    long observed_local_arrivals = 0;
    long observed_local_blocked = 0;
    long observed_migrated_arrivals = 0;
    long observed_migrated_dropped = 0;
};

struct SimReport {
    Estimate blocking_probability;
    Estimate dropping_probability;
    Estimate blocking_rate;
    Estimate dropping_rate;
    Estimate compute_utilization;
    Estimate storage_utilization;
    std::vector<Estimate> mean_local_occupancy;
    std::vector<Estimate> mean_migrated_occupancy;
    ScenarioCounts scenarios;
    int replications = 0;
    std::uint64_t seed = 0;
    std::vector<ReplicationTally> tallies;
};

struct LossSimParams {
    double horizon = 10'000.0;
    double warmup = 1'000.0;
    int replications = 30;
    std::uint64_t seed = 12345;
};

namespace detail {

struct QueuedEvent {
    double time = 0.0;
    std::uint64_t sequence = 0;
    int code = 0;  // mode-specific discriminator
    int class_index = 0;
    long actor = -1;

    bool operator>(const QueuedEvent& other) const {
        if (time != other.time) return time > other.time;
        return sequence > other.sequence;
    }
};

using EventQueue =
    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<QueuedEvent>>;

/// Time-weighted accumulator over the observation window [warmup, horizon].
struct WindowIntegral {
    double warmup = 0.0;
    double horizon = 0.0;
    double last_time = 0.0;
    std::vector<double> values;     // current levels
    std::vector<double> integrals;  // accumulated level * dt

    void init(std::size_t n, double warmup_time, double horizon_time) {
        warmup = warmup_time;
        horizon = horizon_time;
        last_time = 0.0;
        values.assign(n, 0.0);
        integrals.assign(n, 0.0);
    }

    void advance(double now) {
        const double lo = std::max(last_time, warmup);
        const double hi = std::min(now, horizon);
        if (hi > lo) {
            for (std::size_t i = 0; i < values.size(); ++i) {
                integrals[i] += values[i] * (hi - lo);
            }
        }
        last_time = std::max(last_time, now);
    }
};

// One loss-model replication. Admission uses the same predicates as the
// Markov generator, so the simulator and the analytic chain describe the
// same system.
struct LossReplicationOutcome {
    ReplicationTally tally;
    double blocking_probability = 0.0;
    double dropping_probability = 0.0;
    double blocking_rate = 0.0;
    double dropping_rate = 0.0;
    double compute_utilization = 0.0;
    double storage_utilization = 0.0;
    std::vector<double> mean_local_occupancy;
    std::vector<double> mean_migrated_occupancy;
};

inline LossReplicationOutcome run_loss_replication(const reservation::RateModel& model,
                                                   const LossSimParams& params, int replication,
                                                   std::vector<EventRecord>* log) {
    const std::size_t K = model.classes.size();
    const Capacity& cap = model.capacity;

    enum Code { local_arrival = 0, migrated_arrival = 1, local_departure = 2, migrated_departure = 3 };

    std::vector<SplitRng> arrival_local, arrival_migrated, lifetime_local, lifetime_migrated;
    for (std::size_t k = 0; k < K; ++k) {
        arrival_local.emplace_back(params.seed, replication, 4 * k + 0);
        lifetime_local.emplace_back(params.seed, replication, 4 * k + 1);
        arrival_migrated.emplace_back(params.seed, replication, 4 * k + 2);
        lifetime_migrated.emplace_back(params.seed, replication, 4 * k + 3);
    }

    EventQueue queue;
    std::uint64_t sequence = 0;
    auto push = [&](double time, int code, int k) {
        queue.push(QueuedEvent{time, sequence++, code, k, -1});
    };
    for (std::size_t k = 0; k < K; ++k) {
        if (model.classes[k].local_arrival_rate > 0.0) {
            push(arrival_local[k].exponential(model.classes[k].local_arrival_rate), local_arrival,
                 static_cast<int>(k));
        }
        if (model.classes[k].migrated_arrival_rate > 0.0) {
            push(arrival_migrated[k].exponential(model.classes[k].migrated_arrival_rate),
                 migrated_arrival, static_cast<int>(k));
        }
    }

    std::vector<int> n_local(K, 0), n_migrated(K, 0);
    reservation::StateSums occupancy;

    // tracked levels: per-class local, per-class migrated, total compute, total storage
    WindowIntegral window;
    window.init(2 * K + 2, params.warmup, params.horizon);
    auto refresh_levels = [&]() {
        for (std::size_t k = 0; k < K; ++k) {
            window.values[k] = n_local[k];
            window.values[K + k] = n_migrated[k];
        }
        window.values[2 * K] = occupancy.total_compute;
        window.values[2 * K + 1] = occupancy.total_storage;
    };

    ReplicationTally tally;
    auto record = [&](double time, EventKind kind, int k, EventOutcome outcome) {
        if (log) {
            log->push_back(EventRecord{time, kind, k, outcome, 0, -1});
        }
    };

    while (!queue.empty()) {
        const QueuedEvent ev = queue.top();
        if (ev.time > params.horizon) break;
        queue.pop();
        const std::size_t k = static_cast<std::size_t>(ev.class_index);
        const VmClassSpec& spec = model.classes[k];
        const bool observed = ev.time >= params.warmup;

        switch (ev.code) {
            case local_arrival: {
                push(ev.time + arrival_local[k].exponential(spec.local_arrival_rate),
                     local_arrival, ev.class_index);
                ++tally.local_arrivals;
                if (observed) ++tally.observed_local_arrivals;
                if (reservation::local_arrival_admissible(occupancy, spec, cap)) {
                    window.advance(ev.time);
                    ++n_local[k];
                    occupancy.local_compute += spec.compute_req;
                    occupancy.local_storage += spec.storage_req;
                    occupancy.total_compute += spec.compute_req;
                    occupancy.total_storage += spec.storage_req;
                    refresh_levels();
                    push(ev.time + lifetime_local[k].exponential(spec.local_departure_rate),
                         local_departure, ev.class_index);
                    ++tally.local_admitted;
                    record(ev.time, EventKind::local_arrival, ev.class_index,
                           EventOutcome::admitted);
                } else {
                    ++tally.local_blocked;
                    if (observed) ++tally.observed_local_blocked;
                    record(ev.time, EventKind::local_arrival, ev.class_index,
                           EventOutcome::blocked);
                }
                break;
            }
            case migrated_arrival: {
                push(ev.time + arrival_migrated[k].exponential(spec.migrated_arrival_rate),
                     migrated_arrival, ev.class_index);
                ++tally.migrated_arrivals;
                if (observed) ++tally.observed_migrated_arrivals;
                if (reservation::migrated_arrival_admissible(occupancy, spec, cap)) {
                    window.advance(ev.time);
                    ++n_migrated[k];
                    occupancy.total_compute += spec.compute_req;
                    occupancy.total_storage += spec.storage_req;
                    refresh_levels();
                    push(ev.time + lifetime_migrated[k].exponential(spec.migrated_departure_rate),
                         migrated_departure, ev.class_index);
                    ++tally.migrated_admitted;
                    record(ev.time, EventKind::migrated_arrival, ev.class_index,
                           EventOutcome::admitted);
                } else {
                    ++tally.migrated_dropped;
                    if (observed) ++tally.observed_migrated_dropped;
                    record(ev.time, EventKind::migrated_arrival, ev.class_index,
                           EventOutcome::dropped);
                }
                break;
            }
            case local_departure: {
                window.advance(ev.time);
                assert(n_local[k] > 0);
                --n_local[k];
                occupancy.local_compute -= spec.compute_req;
                occupancy.local_storage -= spec.storage_req;
                occupancy.total_compute -= spec.compute_req;
                occupancy.total_storage -= spec.storage_req;
                refresh_levels();
                ++tally.local_departed;
                record(ev.time, EventKind::local_departure, ev.class_index,
                       EventOutcome::completed);
                break;
            }
            case migrated_departure: {
                window.advance(ev.time);
                assert(n_migrated[k] > 0);
                --n_migrated[k];
                occupancy.total_compute -= spec.compute_req;
                occupancy.total_storage -= spec.storage_req;
                refresh_levels();
                ++tally.migrated_departed;
                record(ev.time, EventKind::migrated_departure, ev.class_index,
                       EventOutcome::completed);
                break;
            }
        }
        assert(occupancy.local_compute <= cap.compute_common() &&
               occupancy.local_storage <= cap.storage_common() &&
               occupancy.total_compute <= cap.compute_total &&
               occupancy.total_storage <= cap.storage_total);
    }
    window.advance(params.horizon);

    for (std::size_t k = 0; k < K; ++k) {
        tally.local_resident += n_local[k];
        tally.migrated_resident += n_migrated[k];
    }

    LossReplicationOutcome out;
    out.tally = tally;
    const double duration = params.horizon - params.warmup;
    out.blocking_probability =
        tally.observed_local_arrivals > 0
            ? static_cast<double>(tally.observed_local_blocked) / tally.observed_local_arrivals
            : 0.0;
    out.dropping_probability = tally.observed_migrated_arrivals > 0
                                   ? static_cast<double>(tally.observed_migrated_dropped) /
                                         tally.observed_migrated_arrivals
                                   : 0.0;
    out.blocking_rate = tally.observed_local_blocked / duration;
    out.dropping_rate = tally.observed_migrated_dropped / duration;
    out.mean_local_occupancy.resize(K);
    out.mean_migrated_occupancy.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        out.mean_local_occupancy[k] = window.integrals[k] / duration;
        out.mean_migrated_occupancy[k] = window.integrals[K + k] / duration;
    }
    out.compute_utilization = window.integrals[2 * K] / (duration * cap.compute_total);
    out.storage_utilization = window.integrals[2 * K + 1] / (duration * cap.storage_total);
    return out;
}

} // namespace detail

/// Loss-model simulation: Poisson local and migrated VM arrivals with
/// exponential per-VM lifetimes against the reservation admission rules.
/// Runs independent replications (substreams derived from the master seed)
/// and reports means with 95% Student-t confidence intervals; statistics
/// exclude the warmup interval. An optional log captures replication 0.
inline SimReport run_loss_sim(const reservation::RateModel& model, const LossSimParams& params,
                              std::vector<EventRecord>* log = nullptr) {
    reservation::validate(model);
    if (!(params.horizon > params.warmup) || params.warmup < 0.0) {
        throw std::invalid_argument("run_loss_sim: requires horizon > warmup >= 0");
    }
    if (params.replications < 1) {
        throw std::invalid_argument("run_loss_sim: requires replications >= 1");
    }

    const std::size_t K = model.classes.size();
    const int reps = params.replications;
    std::vector<double> blocking_p(reps), dropping_p(reps), blocking_r(reps), dropping_r(reps);
    std::vector<double> util_c(reps), util_m(reps);
    std::vector<std::vector<double>> occ_l(K, std::vector<double>(reps));
    std::vector<std::vector<double>> occ_g(K, std::vector<double>(reps));

    SimReport report;
    report.replications = reps;
    report.seed = params.seed;
    for (int r = 0; r < reps; ++r) {
        auto outcome = detail::run_loss_replication(model, params, r, r == 0 ? log : nullptr);
        blocking_p[r] = outcome.blocking_probability;
        dropping_p[r] = outcome.dropping_probability;
        blocking_r[r] = outcome.blocking_rate;
        dropping_r[r] = outcome.dropping_rate;
        util_c[r] = outcome.compute_utilization;
        util_m[r] = outcome.storage_utilization;
        for (std::size_t k = 0; k < K; ++k) {
            occ_l[k][r] = outcome.mean_local_occupancy[k];
            occ_g[k][r] = outcome.mean_migrated_occupancy[k];
        }
        report.tallies.push_back(outcome.tally);
    }
    report.blocking_probability = stats::summarize(blocking_p);
    report.dropping_probability = stats::summarize(dropping_p);
    report.blocking_rate = stats::summarize(blocking_r);
    report.dropping_rate = stats::summarize(dropping_r);
    report.compute_utilization = stats::summarize(util_c);
    report.storage_utilization = stats::summarize(util_m);
    for (std::size_t k = 0; k < K; ++k) {
        report.mean_local_occupancy.push_back(stats::summarize(occ_l[k]));
        report.mean_migrated_occupancy.push_back(stats::summarize(occ_g[k]));
    }
    return report;
}

// -- corridor mobility mode ----------------------------------------------------

/// Radio coverage interval of one RSU on the 1-D road, and the cloudlet
/// serving it.
struct RsuRange {
    double begin = 0.0;
    double end = 0.0;
    int cloudlet = 0;

    bool operator==(const RsuRange&) const = default;
};

struct CorridorConfig {
    std::vector<RsuRange> rsus;  // sorted, non-overlapping
    double vehicle_arrival_rate = 0.0;
    double speed_min = 0.0;
    double speed_max = 0.0;
    double vehicular_cloud_probability = 0.0;
    double road_length = 0.0;
    int vm_class = 0;

    bool operator==(const CorridorConfig&) const = default;
};

inline void validate(const CorridorConfig& c, std::size_t class_count,
                     const std::string& path = "corridor") {
    using roadcloud::detail::fail;
    if (!(c.road_length > 0.0)) fail(path + ".road_length", "be > 0");
    if (c.rsus.empty()) fail(path + ".rsus", "contain at least one RSU");
    for (std::size_t i = 0; i < c.rsus.size(); ++i) {
        const std::string p = path + ".rsus[" + std::to_string(i) + "]";
        if (!(c.rsus[i].begin >= 0.0)) fail(p + ".begin", "be >= 0");
        if (!(c.rsus[i].begin < c.rsus[i].end)) fail(p + ".end", "be > begin");
        if (!(c.rsus[i].end <= c.road_length)) fail(p + ".end", "be <= road_length");
        if (c.rsus[i].cloudlet < 0) fail(p + ".cloudlet", "be >= 0");
        if (i > 0 && !(c.rsus[i].begin >= c.rsus[i - 1].end))
            fail(p + ".begin", "not overlap the previous RSU range");
    }
    if (!(c.vehicle_arrival_rate >= 0.0)) fail(path + ".vehicle_arrival_rate", "be >= 0");
    if (!(c.speed_min > 0.0)) fail(path + ".speed_min", "be > 0");
    if (!(c.speed_max >= c.speed_min)) fail(path + ".speed_max", "be >= speed_min");
    if (!(c.vehicular_cloud_probability >= 0.0 && c.vehicular_cloud_probability <= 1.0))
        fail(path + ".vehicular_cloud_probability", "lie in [0, 1]");
    if (c.vm_class < 0 || static_cast<std::size_t>(c.vm_class) >= class_count)
        fail(path + ".vm_class", "index an entry of classes");
}

enum class MigrationScenario {
    inter_cloudlet,
    intra_cloudlet,
    to_vehicular_cloud,
    to_central_cloud
};

inline const char* to_string(MigrationScenario s) {
    switch (s) {
        case MigrationScenario::inter_cloudlet: return "inter_cloudlet";
        case MigrationScenario::intra_cloudlet: return "intra_cloudlet";
        case MigrationScenario::to_vehicular_cloud: return "to_vehicular_cloud";
        case MigrationScenario::to_central_cloud: return "to_central_cloud";
    }
    return "?";
}

/// Classifies one boundary crossing: same cloudlet is a radio handoff; a
/// crossing between cloudlets is an inter-cloudlet migration when admitted,
/// otherwise the displaced VM lands in a neighboring vehicular cloud when
/// one is available and in the central cloud when not.
inline MigrationScenario classify_migration(const CorridorConfig& corridor,
                                            std::size_t source_rsu, std::size_t target_rsu,
                                            bool admitted, bool fallback_to_vehicular) {
    if (source_rsu >= corridor.rsus.size() || target_rsu >= corridor.rsus.size()) {
        throw std::out_of_range("classify_migration: unknown RSU id");
    }
    if (corridor.rsus[source_rsu].cloudlet == corridor.rsus[target_rsu].cloudlet) {
        return MigrationScenario::intra_cloudlet;
    }
    if (admitted) {
        return MigrationScenario::inter_cloudlet;
    }
    return fallback_to_vehicular ? MigrationScenario::to_vehicular_cloud
                                 : MigrationScenario::to_central_cloud;
}

/// Per-vehicle accounting: every boundary crossing it encountered is either
/// a handoff or a migration attempt.
struct VehicleTally {
    long id = 0;
    int boundary_crossings = 0;
    int handoffs = 0;
    int migration_attempts = 0;
    bool completed = false;
};

struct CorridorResult {
    SimReport report;
    std::vector<EventRecord> log;
    std::vector<VehicleTally> vehicles;
};

/// Corridor mobility simulation: vehicles enter the road at Poisson times,
/// traverse at a constant per-vehicle speed, and carry one VM that follows
/// them between cloudlets under the reservation admission rules. The VM is
/// created as a local VM at the first serving cloudlet (hosted centrally if
/// that fails) and each inter-cloudlet crossing attempts to place it at the
/// new cloudlet as a migrated VM.
inline CorridorResult run_corridor_sim(const CorridorConfig& corridor,
                                       const std::vector<VmClassSpec>& classes,
                                       const Capacity& cloudlet_capacity, double horizon,
                                       std::uint64_t seed) {
    validate(corridor, classes.size());
    roadcloud::validate(cloudlet_capacity, "capacity");
    for (std::size_t k = 0; k < classes.size(); ++k) {
        roadcloud::validate(classes[k], "classes[" + std::to_string(k) + "]");
    }
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("run_corridor_sim: requires horizon > 0");
    }

    const VmClassSpec& vm = classes[static_cast<std::size_t>(corridor.vm_class)];
    const int vm_class = corridor.vm_class;

    SplitRng entry_stream(seed, 0, 0);
    SplitRng speed_stream(seed, 0, 1);
    SplitRng fallback_stream(seed, 0, 2);

    enum Code { vehicle_entry = 0, enter_rsu = 1, exit_road = 2 };
    detail::EventQueue queue;
    std::uint64_t sequence = 0;
    auto push = [&](double time, int code, int rsu, long vehicle) {
        queue.push(detail::QueuedEvent{time, sequence++, code, rsu, vehicle});
    };

    enum class Host { none, roadside_local, roadside_migrated, vehicular, central };
    struct Vehicle {
        int serving_rsu = -1;
        Host host = Host::none;
        int host_cloudlet = -1;
        VehicleTally tally;
    };
    std::vector<Vehicle> vehicles;

    struct CloudletLoad {
        reservation::StateSums sums;
        long local = 0;
        long migrated = 0;
    };
    std::unordered_map<int, CloudletLoad> cloudlets;
    for (const RsuRange& r : corridor.rsus) {
        cloudlets.try_emplace(r.cloudlet);
    }

    CorridorResult result;
    auto record = [&](double time, EventKind kind, EventOutcome outcome, int cloudlet,
                      long vehicle) {
        result.log.push_back(EventRecord{time, kind, vm_class, outcome, cloudlet, vehicle});
    };

    auto release = [&](double time, Vehicle& v, long id) {
        if (v.host == Host::roadside_local || v.host == Host::roadside_migrated) {
            CloudletLoad& load = cloudlets[v.host_cloudlet];
            if (v.host == Host::roadside_local) {
                load.sums.local_compute -= vm.compute_req;
                load.sums.local_storage -= vm.storage_req;
                --load.local;
                record(time, EventKind::local_departure, EventOutcome::completed,
                       v.host_cloudlet, id);
            } else {
                --load.migrated;
                record(time, EventKind::migrated_departure, EventOutcome::completed,
                       v.host_cloudlet, id);
            }
            load.sums.total_compute -= vm.compute_req;
            load.sums.total_storage -= vm.storage_req;
        }
        v.host = Host::none;
        v.host_cloudlet = -1;
    };

    ScenarioCounts scenarios;
    long placements = 0, placements_blocked = 0;

    if (corridor.vehicle_arrival_rate > 0.0) {
        push(entry_stream.exponential(corridor.vehicle_arrival_rate), vehicle_entry, 0, -1);
    }

    while (!queue.empty()) {
        const detail::QueuedEvent ev = queue.top();
        if (ev.time > horizon) break;
        queue.pop();

        switch (ev.code) {
            case vehicle_entry: {
                push(ev.time + entry_stream.exponential(corridor.vehicle_arrival_rate),
                     vehicle_entry, 0, -1);
                const long id = static_cast<long>(vehicles.size());
                vehicles.emplace_back();
                vehicles[id].tally.id = id;
                const double speed = speed_stream.uniform(corridor.speed_min, corridor.speed_max);
                for (std::size_t i = 0; i < corridor.rsus.size(); ++i) {
                    push(ev.time + corridor.rsus[i].begin / speed, enter_rsu,
                         static_cast<int>(i), id);
                }
                push(ev.time + corridor.road_length / speed, exit_road, 0, id);
                break;
            }
            case enter_rsu: {
                Vehicle& v = vehicles[static_cast<std::size_t>(ev.actor)];
                const int rsu = ev.class_index;
                const int target_cloudlet = corridor.rsus[rsu].cloudlet;
                const int prev_rsu = v.serving_rsu;
                v.serving_rsu = rsu;
                if (prev_rsu < 0) {
                    // first coverage: the vehicle's VM is created as a local VM
                    ++placements;
                    CloudletLoad& load = cloudlets[target_cloudlet];
                    if (reservation::local_arrival_admissible(load.sums, vm,
                                                              cloudlet_capacity)) {
                        load.sums.local_compute += vm.compute_req;
                        load.sums.local_storage += vm.storage_req;
                        load.sums.total_compute += vm.compute_req;
                        load.sums.total_storage += vm.storage_req;
                        ++load.local;
                        v.host = Host::roadside_local;
                        v.host_cloudlet = target_cloudlet;
                        record(ev.time, EventKind::local_arrival, EventOutcome::admitted,
                               target_cloudlet, ev.actor);
                    } else {
                        ++placements_blocked;
                        v.host = Host::central;
                        record(ev.time, EventKind::local_arrival, EventOutcome::blocked,
                               target_cloudlet, ev.actor);
                    }
                    break;
                }
                ++v.tally.boundary_crossings;
                CloudletLoad& load = cloudlets[target_cloudlet];
                bool admitted = false, fallback = false;
                if (corridor.rsus[prev_rsu].cloudlet != target_cloudlet) {
                    admitted = reservation::migrated_arrival_admissible(load.sums, vm,
                                                                        cloudlet_capacity);
                    if (!admitted) {
                        fallback =
                            fallback_stream.bernoulli(corridor.vehicular_cloud_probability);
                    }
                }
                switch (classify_migration(corridor, static_cast<std::size_t>(prev_rsu),
                                           static_cast<std::size_t>(rsu), admitted, fallback)) {
                    case MigrationScenario::intra_cloudlet:
                        ++v.tally.handoffs;
                        ++scenarios.intra_cloudlet_handoff;
                        record(ev.time, EventKind::handoff_no_migration,
                               EventOutcome::completed, target_cloudlet, ev.actor);
                        break;
                    case MigrationScenario::inter_cloudlet:
                        ++v.tally.migration_attempts;
                        release(ev.time, v, ev.actor);
                        load.sums.total_compute += vm.compute_req;
                        load.sums.total_storage += vm.storage_req;
                        ++load.migrated;
                        v.host = Host::roadside_migrated;
                        v.host_cloudlet = target_cloudlet;
                        ++scenarios.inter_cloudlet;
                        record(ev.time, EventKind::migrated_arrival, EventOutcome::admitted,
                               target_cloudlet, ev.actor);
                        break;
                    case MigrationScenario::to_vehicular_cloud:
                    case MigrationScenario::to_central_cloud:
                        ++v.tally.migration_attempts;
                        release(ev.time, v, ev.actor);
                        if (fallback) {
                            v.host = Host::vehicular;
                            ++scenarios.to_vehicular_cloud;
                        } else {
                            v.host = Host::central;
                            ++scenarios.to_central_cloud;
                        }
                        record(ev.time, EventKind::migrated_arrival, EventOutcome::dropped,
                               target_cloudlet, ev.actor);
                        break;
                }
                break;
            }
            case exit_road: {
                Vehicle& v = vehicles[static_cast<std::size_t>(ev.actor)];
                release(ev.time, v, ev.actor);
                v.tally.completed = true;
                break;
            }
        }
    }

    SimReport& report = result.report;
    report.scenarios = scenarios;
    report.replications = 1;
    report.seed = seed;
    const long attempts = scenarios.inter_cloudlet + scenarios.to_vehicular_cloud +
                          scenarios.to_central_cloud;
    const long dropped = scenarios.to_vehicular_cloud + scenarios.to_central_cloud;
    report.dropping_probability.mean =
        attempts > 0 ? static_cast<double>(dropped) / static_cast<double>(attempts) : 0.0;
    report.dropping_rate.mean = static_cast<double>(dropped) / horizon;
    report.blocking_probability.mean =
        placements > 0 ? static_cast<double>(placements_blocked) / static_cast<double>(placements)
                       : 0.0;
    report.blocking_rate.mean = static_cast<double>(placements_blocked) / horizon;

    result.vehicles.reserve(vehicles.size());
    for (const Vehicle& v : vehicles) {
        result.vehicles.push_back(v.tally);
    }
    return result;
}

// -- analytic cross-validation -------------------------------------------------

struct ComparisonRow {
    std::string metric;
    double analytic = 0.0;
    double simulated = 0.0;
    double ci_half_width = 0.0;
    bool within_ci = false;
};

/// Validation table: analytic steady-state metrics against simulation
/// estimates and their confidence intervals.
inline std::vector<ComparisonRow> compare_analytic_vs_sim(
    const reservation::RateModel& model, const LossSimParams& params,
    const reservation::SolveOptions& options = {}) {
    const SteadyStateSolution solution = reservation::analyze(model, options);
    const SimReport report = run_loss_sim(model, params);

    const std::size_t K = model.classes.size();
    const auto sums = reservation::state_sums(solution.states, model.classes);
    double util_c = 0.0, util_m = 0.0;
    std::vector<double> occ_l(K, 0.0), occ_g(K, 0.0);
    for (std::size_t s = 0; s < solution.states.size(); ++s) {
        const double p = solution.probabilities[s];
        util_c += p * sums[s].total_compute;
        util_m += p * sums[s].total_storage;
        for (std::size_t k = 0; k < K; ++k) {
            occ_l[k] += p * solution.states[s].local_counts[k];
            occ_g[k] += p * solution.states[s].migrated_counts[k];
        }
    }
    util_c /= model.capacity.compute_total;
    util_m /= model.capacity.storage_total;

    std::vector<ComparisonRow> rows;
    auto add = [&rows](std::string metric, double analytic, const Estimate& est) {
        rows.push_back(ComparisonRow{std::move(metric), analytic, est.mean, est.ci_half_width,
                                     std::abs(analytic - est.mean) <= est.ci_half_width});
    };
    add("blocking_probability", solution.blocking_probability, report.blocking_probability);
    add("dropping_probability", solution.dropping_probability, report.dropping_probability);
    add("compute_utilization", util_c, report.compute_utilization);
    add("storage_utilization", util_m, report.storage_utilization);
    for (std::size_t k = 0; k < K; ++k) {
        add("local_occupancy_" + std::to_string(k), occ_l[k], report.mean_local_occupancy[k]);
        add("migrated_occupancy_" + std::to_string(k), occ_g[k],
            report.mean_migrated_occupancy[k]);
    }
    return rows;
}

} // namespace roadcloud::sim
