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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roadcloud/config.hpp"
#include "roadcloud/csv.hpp"
#include "roadcloud/game.hpp"
#include "roadcloud/model.hpp"
#include "roadcloud/reservation.hpp"
#include "roadcloud/rng.hpp"
#include "roadcloud/sim.hpp"
#include "roadcloud/version.hpp"

namespace fs = std::filesystem;
namespace rc = roadcloud;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_not_converged = 3;
constexpr int exit_state_overflow = 4;
constexpr int exit_infeasible = 5;

// Files are written through a temporary and renamed into place so a partial
// run never leaves a truncated result behind.
void write_file(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
    }
    fs::rename(tmp, path);
}

class Run {
public:
    Run(std::string command, std::string config_path, std::string out_dir)
        : command_(std::move(command)),
          config_path_(std::move(config_path)),
          out_dir_(std::move(out_dir)),
          started_(std::chrono::steady_clock::now()) {
        fs::create_directories(out_dir_);
        std::ifstream in(config_path_);
        if (!in) {
            throw rc::ConfigError("cannot open configuration file: " + config_path_);
        }
        nlohmann::json raw;
        try {
            in >> raw;
        } catch (const nlohmann::json::parse_error& err) {
            throw rc::ConfigError("configuration is not valid JSON: " + std::string(err.what()));
        }
        hash_ = rc::config_hash(raw);
        document_ = rc::validate_config(raw);
    }

    const rc::Document& document() const { return document_; }
    const std::string& config_hash() const { return hash_; }

    void emit(const std::string& name, const std::string& content) {
        write_file(fs::path(out_dir_) / name, content);
        outputs_.push_back(name);
    }

    void finish(const std::string& summary, std::uint64_t seed) {
        std::cout << summary;
        emit("summary.txt", summary);
        const double duration =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        nlohmann::json manifest = {{"command", command_},
                                   {"config_path", config_path_},
                                   {"config_hash", hash_},
                                   {"seed", seed},
                                   {"tool_version", rc::version_string},
                                   {"duration_seconds", duration},
                                   {"outputs", outputs_}};
        write_file(fs::path(out_dir_) / "manifest.json", manifest.dump(2) + "\n");
    }

private:
    std::string command_;
    std::string config_path_;
    std::string out_dir_;
    std::string hash_;
    rc::Document document_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point started_;
};

// "0,5,10" or "start:step:stop" (stop inclusive)
std::vector<double> parse_axis(const std::string& text, const std::string& what) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        double start = 0, step = 0, stop = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || step <= 0) {
            throw rc::ConfigError("grid axis " + what + " must be start:step:stop with step > 0");
        }
        for (double v = start; v <= stop + 1e-12; v += step) {
            values.push_back(v);
        }
    } else {
        std::istringstream in(text);
        std::string token;
        while (std::getline(in, token, ',')) {
            values.push_back(std::stod(token));
        }
    }
    if (values.empty()) {
        throw rc::ConfigError("grid axis " + what + " is empty");
    }
    return values;
}

// "cr=<axis>;mr=<axis>"; the candidate list is the cross product in
// row-major (cr outer) order.
std::vector<std::pair<double, double>> parse_grid(const std::string& spec) {
    const auto sep = spec.find(';');
    if (sep == std::string::npos || spec.rfind("cr=", 0) != 0 ||
        spec.compare(sep + 1, 3, "mr=") != 0) {
        throw rc::ConfigError("grid spec must look like cr=0:5:20;mr=0,10,20");
    }
    const auto crs = parse_axis(spec.substr(3, sep - 3), "cr");
    const auto mrs = parse_axis(spec.substr(sep + 4), "mr");
    std::vector<std::pair<double, double>> grid;
    for (double cr : crs) {
        for (double mr : mrs) {
            grid.emplace_back(cr, mr);
        }
    }
    return grid;
}

std::vector<std::pair<double, double>> default_grid(const rc::Capacity& cap) {
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            grid.emplace_back(std::floor(cap.compute_total * 0.1 * i),
                              std::floor(cap.storage_total * 0.1 * j));
        }
    }
    return grid;
}

int run_allocate(const std::string& config_path, const std::string& out_dir, bool trace,
                 int restarts) {
    Run run("allocate", config_path, out_dir);
    if (!run.document().game) {
        throw rc::ConfigError("game must be present for the allocate command");
    }
    const rc::GameConfig& cfg = *run.document().game;
    const std::uint64_t seed = run.document().simulation.seed;

    std::vector<rc::game::TraceRow> trace_rows;
    const rc::AllocationProfile profile =
        rc::game::solve_nash(cfg, trace ? &trace_rows : nullptr);

    run.emit("allocation.csv", rc::csv::allocation_csv(profile, cfg));
    if (trace) {
        run.emit("trajectory.csv", rc::csv::trajectory_csv(trace_rows));
    }

    std::ostringstream summary;
    summary << "allocate: " << cfg.players.size() << " players, C="
            << cfg.capacity.compute_total << ", M=" << cfg.capacity.storage_total << "\n";
    summary << "converged: " << (profile.converged ? "yes" : "no")
            << " after " << profile.iterations_used << " rounds\n";
    const auto uniq = rc::game::check_uniqueness(cfg);
    summary << "uniqueness conditions: " << (uniq.holds ? "hold" : "violated") << "\n";
    for (std::size_t i = 0; i < profile.requests_compute.size(); ++i) {
        summary << "player " << i << ": request (" << profile.requests_compute[i] << ", "
                << profile.requests_storage[i] << "), share (" << profile.shares_compute[i]
                << ", " << profile.shares_storage[i] << ")\n";
    }

    if (restarts > 0) {
        std::vector<rc::AllocationProfile> runs;
        for (int r = 0; r < restarts; ++r) {
            rc::SplitRng rng(seed, static_cast<std::uint64_t>(r), 1000);
            std::vector<double> c0(cfg.players.size()), m0(cfg.players.size());
            for (std::size_t i = 0; i < cfg.players.size(); ++i) {
                c0[i] = rng.uniform(cfg.request_floor, cfg.capacity.compute_total);
                m0[i] = rng.uniform(cfg.request_floor, cfg.capacity.storage_total);
            }
            runs.push_back(rc::game::solve_nash(cfg, std::move(c0), std::move(m0)));
        }
        double max_distance = 0.0;
        for (std::size_t a = 0; a < runs.size(); ++a) {
            for (std::size_t b = a + 1; b < runs.size(); ++b) {
                for (std::size_t i = 0; i < cfg.players.size(); ++i) {
                    max_distance = std::max(
                        max_distance, std::abs(runs[a].requests_compute[i] -
                                               runs[b].requests_compute[i]));
                    max_distance = std::max(
                        max_distance, std::abs(runs[a].requests_storage[i] -
                                               runs[b].requests_storage[i]));
                }
            }
        }
        summary << "restarts: " << restarts << ", max pairwise equilibrium distance: "
                << max_distance << "\n";
    }

    run.finish(summary.str(), seed);
    return profile.converged ? exit_ok : exit_not_converged;
}

int run_steady_state(const std::string& config_path, const std::string& out_dir) {
    Run run("steady-state", config_path, out_dir);
    const rc::reservation::RateModel model = run.document().rate_model();
    const rc::SteadyStateSolution solution = rc::reservation::analyze(model);

    run.emit("steady_state.csv", rc::csv::steady_state_csv(solution));
    run.emit("rates.csv", rc::csv::rates_csv(solution));

    std::ostringstream summary;
    summary << "steady-state: " << solution.states.size() << " states\n";
    summary << "blocking rate " << solution.blocking_rate << " (probability "
            << solution.blocking_probability << ")\n";
    summary << "dropping rate " << solution.dropping_rate << " (probability "
            << solution.dropping_probability << ")\n";
    run.finish(summary.str(), run.document().simulation.seed);
    return exit_ok;
}

int run_optimize(const std::string& config_path, const std::string& out_dir, double rbc,
                 const std::string& grid_spec) {
    Run run("optimize", config_path, out_dir);
    const rc::reservation::RateModel model = run.document().rate_model();
    const auto grid = grid_spec.empty() ? default_grid(model.capacity) : parse_grid(grid_spec);
    const rc::reservation::ReservationPlan plan =
        rc::reservation::optimize_reservation(model, rbc, grid);

    run.emit("reservation_grid.csv", rc::csv::grid_csv(plan));

    std::ostringstream summary;
    summary << "optimize: " << plan.table.size() << " candidates, blocking constraint " << rbc
            << "\n";
    if (plan.feasible) {
        const auto& best = plan.best();
        summary << "chosen reservation: C_r=" << best.compute_reserved
                << ", M_r=" << best.storage_reserved << "\n";
        summary << "dropping rate " << best.dropping_rate << ", blocking rate "
                << best.blocking_rate << "\n";
    } else {
        summary << "infeasible: no candidate satisfies the blocking constraint\n";
    }
    run.finish(summary.str(), run.document().simulation.seed);
    return plan.feasible ? exit_ok : exit_infeasible;
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::string& mode, std::optional<std::uint64_t> seed,
                 std::optional<int> reps, std::optional<double> horizon, bool events) {
    Run run("simulate", config_path, out_dir);
    rc::SimulationParams params = run.document().simulation;
    if (seed) params.seed = *seed;
    if (reps) params.replications = *reps;
    if (horizon) {
        params.horizon = *horizon;
        params.warmup = 0.1 * params.horizon;
    }

    std::ostringstream summary;
    if (mode == "loss") {
        const rc::reservation::RateModel model = run.document().rate_model();
        rc::sim::LossSimParams loss{params.horizon, params.warmup, params.replications,
                                    params.seed};
        std::vector<rc::sim::EventRecord> log;
        const rc::sim::SimReport report =
            rc::sim::run_loss_sim(model, loss, events ? &log : nullptr);
        run.emit("sim_report.csv", rc::csv::sim_report_csv(report, run.config_hash()));
        if (events) {
            run.emit("events.csv", rc::csv::events_csv(log));
        }
        summary << "simulate loss: " << report.replications << " replications, horizon "
                << params.horizon << ", warmup " << params.warmup << ", seed " << params.seed
                << "\n";
        summary << "blocking probability " << report.blocking_probability.mean << " +/- "
                << report.blocking_probability.ci_half_width << "\n";
        summary << "dropping probability " << report.dropping_probability.mean << " +/- "
                << report.dropping_probability.ci_half_width << "\n";
        summary << "compute utilization " << report.compute_utilization.mean << " +/- "
                << report.compute_utilization.ci_half_width << "\n";
        summary << "storage utilization " << report.storage_utilization.mean << " +/- "
                << report.storage_utilization.ci_half_width << "\n";
    } else if (mode == "corridor") {
        if (!run.document().corridor) {
            throw rc::ConfigError("corridor must be present for --mode corridor");
        }
        const rc::Document& doc = run.document();
        const rc::sim::CorridorResult result = rc::sim::run_corridor_sim(
            *doc.corridor, *doc.classes, *doc.capacity, params.horizon, params.seed);
        run.emit("sim_report.csv", rc::csv::sim_report_csv(result.report, run.config_hash()));
        if (events) {
            run.emit("events.csv", rc::csv::events_csv(result.log));
        }
        long completed = 0;
        for (const auto& v : result.vehicles) {
            if (v.completed) ++completed;
        }
        const auto& s = result.report.scenarios;
        summary << "simulate corridor: horizon " << params.horizon << ", seed " << params.seed
                << "\n";
        summary << "vehicles entered " << result.vehicles.size() << ", completed " << completed
                << "\n";
        summary << "inter-cloudlet migrations " << s.inter_cloudlet << "\n";
        summary << "intra-cloudlet handoffs " << s.intra_cloudlet_handoff << "\n";
        summary << "to vehicular cloud " << s.to_vehicular_cloud << "\n";
        summary << "to central cloud " << s.to_central_cloud << "\n";
    } else {
        throw rc::ConfigError("--mode must be loss or corridor");
    }
    run.finish(summary.str(), params.seed);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"roadside cloudlet resource management: allocation game, reservation analysis "
                 "and simulation"};
    app.set_version_flag("--version", std::string("roadcloud ") + rc::version_string);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration JSON file")->required();
        cmd->add_option("--out", out_dir, "output directory (default ./results)");
    };

    CLI::App* allocate = app.add_subcommand("allocate", "solve the VM allocation game");
    bool trace = false;
    int restarts = 0;
    add_common(allocate);
    allocate->add_flag("--trace", trace, "emit the per-round trajectory CSV");
    allocate->add_option("--restarts", restarts, "random restarts for the agreement check");

    CLI::App* steady =
        app.add_subcommand("steady-state", "solve the reservation Markov chain");
    add_common(steady);

    CLI::App* optimize = app.add_subcommand("optimize", "grid search over reservations");
    double rbc = 0.0;
    std::string grid_spec;
    add_common(optimize);
    optimize->add_option("--rbc", rbc, "blocking-rate constraint R_b^c")->required();
    optimize->add_option("--grid", grid_spec, "grid spec, e.g. cr=0:5:20;mr=0:10:40");

    CLI::App* simulate = app.add_subcommand("simulate", "discrete-event simulation");
    std::string mode;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<double> horizon;
    bool events = false;
    add_common(simulate);
    simulate->add_option("--mode", mode, "loss or corridor")->required();
    simulate->add_option("--seed", seed, "master seed override");
    simulate->add_option("--reps", reps, "replication count override");
    simulate->add_option("--horizon", horizon, "horizon override (resets warmup to 10%)");
    simulate->add_flag("--events", events, "emit the event log CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*allocate) return run_allocate(config_path, out_dir, trace, restarts);
        if (*steady) return run_steady_state(config_path, out_dir);
        if (*optimize) return run_optimize(config_path, out_dir, rbc, grid_spec);
        if (*simulate)
            return run_simulate(config_path, out_dir, mode, seed, reps, horizon, events);
    } catch (const rc::reservation::StateSpaceOverflow& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_state_overflow;
    } catch (const rc::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return exit_ok;
}
