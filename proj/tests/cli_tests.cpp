// Exercises the command-line tool end to end: exit codes, output schemas,
// manifest contents and byte-level determinism. Takes the tool path and the
// sample-config directory as arguments.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string g_tool;
fs::path g_workdir;
int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

int run(const std::string& args) {
    const std::string command = g_tool + " " + args + " >" + (g_workdir / "stdout.txt").string() +
                                " 2>" + (g_workdir / "stderr.txt").string();
    const int status = std::system(command.c_str());
    if (status < 0) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

void write(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: cli_tests <roadcloud-binary> <config-dir>\n";
        return 2;
    }
    g_tool = argv[1];
    const fs::path configs = argv[2];
    g_workdir = fs::temp_directory_path() / "roadcloud_cli_tests";
    fs::remove_all(g_workdir);
    fs::create_directories(g_workdir);
    const auto out = [&](const char* name) { return (g_workdir / name).string(); };

    // allocate: three-player game config
    {
        const std::string cfg = (configs / "game_three_players.json").string();
        const int code = run("allocate --config " + cfg + " --restarts 10 --trace --out " +
                             out("alloc"));
        check(code == 0, "allocate exits 0 on the three-player config");
        const std::string alloc = slurp(g_workdir / "alloc" / "allocation.csv");
        check(first_line(alloc) ==
                  "player,request_compute,request_storage,share_compute,share_storage,utility",
              "allocation.csv schema");
        check(fs::exists(g_workdir / "alloc" / "trajectory.csv"), "trajectory.csv written");
        const std::string traj = slurp(g_workdir / "alloc" / "trajectory.csv");
        check(first_line(traj) ==
                  "round,player,request_compute,request_storage,share_compute,share_storage,"
                  "utility",
              "trajectory.csv schema");
        const std::string summary = slurp(g_workdir / "alloc" / "summary.txt");
        check(summary.find("max pairwise equilibrium distance") != std::string::npos,
              "restart agreement reported");

        nlohmann::json manifest;
        std::ifstream in(g_workdir / "alloc" / "manifest.json");
        in >> manifest;
        check(manifest["command"] == "allocate" && manifest.contains("config_hash") &&
                  manifest.contains("tool_version") && manifest.contains("duration_seconds"),
              "manifest records the run");

        // shares in the CSV sum to the pools
        double sum_c = 0.0, sum_m = 0.0;
        std::istringstream lines(alloc);
        std::string line;
        std::getline(lines, line);  // header
        while (std::getline(lines, line)) {
            std::istringstream fields(line);
            std::string field;
            std::vector<std::string> cols;
            while (std::getline(fields, field, ',')) cols.push_back(field);
            sum_c += std::stod(cols[3]);
            sum_m += std::stod(cols[4]);
        }
        check(std::abs(sum_c - 50.0) < 1e-9 && std::abs(sum_m - 100.0) < 1e-9,
              "CSV shares sum to the pools");
    }

    // config error paths
    {
        write(g_workdir / "bad.json", R"({"capacity": {"compute_total": 0, "storage_total": 1}})");
        const int code = run("allocate --config " + (g_workdir / "bad.json").string() +
                             " --out " + out("bad"));
        check(code == 2, "invalid config exits 2");
        check(slurp(g_workdir / "stderr.txt").find("compute_total") != std::string::npos,
              "error names the offending field");

        const int missing = run("allocate --config /nonexistent.json --out " + out("bad2"));
        check(missing == 2, "missing config file exits 2");
    }

    // non-convergence exit code
    {
        write(g_workdir / "hard.json", R"({
          "capacity": {"compute_total": 50, "storage_total": 100},
          "game": {
            "players": [
              {"alpha": 1, "beta": 1, "price_compute": 1, "price_storage": 1},
              {"alpha": 1, "beta": 1, "price_compute": 1, "price_storage": 1},
              {"alpha": 1, "beta": 1, "price_compute": 1, "price_storage": 1}
            ],
            "max_iterations": 1,
            "initial_compute": [10, 5, 5],
            "initial_storage": [5, 15, 10]
          }
        })");
        const int code = run("allocate --config " + (g_workdir / "hard.json").string() +
                             " --out " + out("hard"));
        check(code == 3, "non-convergence exits 3");
        check(fs::exists(g_workdir / "hard" / "allocation.csv"),
              "profile still written on non-convergence");
    }

    // steady-state on the two-class reservation config
    {
        const std::string cfg = (configs / "two_class_reservation.json").string();
        const int code = run("steady-state --config " + cfg + " --out " + out("steady"));
        check(code == 0, "steady-state exits 0");
        const std::string head = first_line(slurp(g_workdir / "steady" / "steady_state.csv"));
        check(head == "n_l_1,n_l_2,n_g_1,n_g_2,pi", "steady_state.csv schema");
        const std::string rates = slurp(g_workdir / "steady" / "rates.csv");
        check(first_line(rates) == "metric,value", "rates.csv schema");
        check(rates.find("dropping_rate") != std::string::npos, "rates.csv lists dropping_rate");
    }

    // state-space overflow exit code
    {
        std::ifstream in(configs / "two_class_reservation.json");
        nlohmann::json doc;
        in >> doc;
        doc["simulation"]["state_cap"] = 3;
        write(g_workdir / "overflow.json", doc.dump());
        const int code = run("steady-state --config " + (g_workdir / "overflow.json").string() +
                             " --out " + out("overflow"));
        check(code == 4, "state-space overflow exits 4");
        check(slurp(g_workdir / "stderr.txt").find("cap") != std::string::npos,
              "overflow message reports the cap");
    }

    // optimize: grid table, feasible and infeasible
    {
        const std::string cfg = (configs / "two_class_reservation.json").string();
        const int code = run("optimize --config " + cfg +
                             " --rbc 1.0 --grid \"cr=0:5:20;mr=0:10:40\" --out " + out("opt"));
        check(code == 0, "optimize exits 0 under a loose constraint");
        const std::string grid = slurp(g_workdir / "opt" / "reservation_grid.csv");
        check(first_line(grid) ==
                  "compute_reserved,storage_reserved,blocking_rate,blocking_probability,"
                  "dropping_rate,dropping_probability,states,feasible,chosen",
              "reservation_grid.csv schema");
        check(grid.find(",1\n") != std::string::npos, "a candidate is marked chosen");

        const int infeasible = run("optimize --config " + cfg +
                                   " --rbc 0 --grid \"cr=0;mr=0\" --out " + out("opt0"));
        check(infeasible == 5, "unsatisfiable blocking constraint exits 5");
        check(fs::exists(g_workdir / "opt0" / "reservation_grid.csv"),
              "grid table still written when infeasible");
    }

    // simulate loss: schema and determinism across identical seeds
    {
        const std::string cfg = (configs / "two_class_reservation.json").string();
        const std::string common = "simulate --config " + cfg +
                                   " --mode loss --seed 99 --reps 5 --horizon 2000 --events";
        check(run(common + " --out " + out("sim_a")) == 0, "simulate loss exits 0");
        check(run(common + " --out " + out("sim_b")) == 0, "simulate loss repeats");
        check(slurp(g_workdir / "sim_a" / "sim_report.csv") ==
                  slurp(g_workdir / "sim_b" / "sim_report.csv"),
              "sim_report.csv byte-identical for a fixed seed");
        check(slurp(g_workdir / "sim_a" / "events.csv") ==
                  slurp(g_workdir / "sim_b" / "events.csv"),
              "events.csv byte-identical for a fixed seed");
        check(first_line(slurp(g_workdir / "sim_a" / "events.csv")) ==
                  "time,kind,class,outcome,cloudlet,vehicle_id",
              "events.csv schema");
        const std::string report = slurp(g_workdir / "sim_a" / "sim_report.csv");
        check(first_line(report).rfind("config_hash,seed,replications,blocking_probability,",
                                       0) == 0,
              "sim_report.csv schema");

        const int other = run("simulate --config " + cfg +
                              " --mode loss --seed 100 --reps 5 --horizon 2000 --out " +
                              out("sim_c"));
        check(other == 0 && slurp(g_workdir / "sim_a" / "sim_report.csv") !=
                                slurp(g_workdir / "sim_c" / "sim_report.csv"),
              "different seeds give different reports");
    }

    // simulate corridor: single-cloudlet map yields no migrations
    {
        const std::string cfg = (configs / "corridor_single_cloudlet.json").string();
        const int code = run("simulate --config " + cfg + " --mode corridor --events --out " +
                             out("corr"));
        check(code == 0, "simulate corridor exits 0");
        const std::string summary = slurp(g_workdir / "corr" / "summary.txt");
        check(summary.find("inter-cloudlet migrations 0") != std::string::npos,
              "single shared cloudlet produces zero migrations");
        const std::string events = slurp(g_workdir / "corr" / "events.csv");
        check(events.find("handoff_no_migration") != std::string::npos,
              "handoffs recorded in the event log");

        const std::string multi = (configs / "corridor_five_cloudlets.json").string();
        const int code2 = run("simulate --config " + multi + " --mode corridor --out " +
                              out("corr5"));
        check(code2 == 0, "five-cloudlet corridor exits 0");
        const std::string summary5 = slurp(g_workdir / "corr5" / "summary.txt");
        check(summary5.find("inter-cloudlet migrations 0") == std::string::npos,
              "distinct cloudlets produce migrations");
    }

    // steady-state determinism at the file level
    {
        const std::string cfg = (configs / "two_class_reservation.json").string();
        check(run("steady-state --config " + cfg + " --out " + out("st_a")) == 0,
              "steady-state rerun");
        check(slurp(g_workdir / "steady" / "steady_state.csv") ==
                  slurp(g_workdir / "st_a" / "steady_state.csv"),
              "steady_state.csv byte-identical across runs");
    }

    if (g_failures == 0) {
        std::printf("all cli checks passed\n");
    } else {
        std::printf("%d cli check(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
