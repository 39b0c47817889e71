#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swarmalator/config.hpp"
#include "swarmalator/io.hpp"
#include "swarmalator/plot.hpp"
#include "swarmalator/run.hpp"
#include "swarmalator/sweep.hpp"

namespace {

using namespace swarm;
namespace fs = std::filesystem;

enum Exit : int { ok = 0, failure = 1, config_error = 2, solver_error = 3 };

void print_summary(const ObservableSummary& s) {
    std::printf("t          %.6g\n", s.t);
    std::printf("R_phase    %.6f\n", s.R_phase);
    std::printf("R_heading  %.6f\n", s.R_heading);
    std::printf("S_plus     %.6f\n", s.S_plus);
    std::printf("S_minus    %.6f\n", s.S_minus);
    std::printf("n_clusters %zu\n", s.n_clusters);
    std::printf("mean_speed %.6g\n", s.mean_speed);
    std::printf("local_R    %.6f\n", s.local_R);
    std::printf("diameter   %.6g\n", s.diameter);
    std::printf("label      %s\n", std::string(to_string(s.label)).c_str());
}

// The run config stored in a trajectory sidecar, if the trajectory came from `simulate`.
std::optional<SimConfig> sidecar_config(const fs::path& trajectory) {
    const auto meta = read_json_file(metadata_path(trajectory));
    if (!meta.contains("config")) return std::nullopt;
    return parse_sim_config(meta.at("config"));
}

struct Globals {
    std::optional<std::uint64_t> seed;
    fs::path out_dir{"out"};
    std::optional<std::size_t> workers;
};

int cmd_simulate(const Globals& g, const fs::path& config_path) {
    SimConfig cfg = load_sim_config(config_path);
    if (g.seed) cfg.seed = *g.seed;
    const RunResult result = run_simulation(cfg);
    for (const auto& p : write_run_outputs(cfg, result, g.out_dir)) std::printf("wrote %s\n", p.string().c_str());
    const auto& st = result.trajectory.stats;
    std::printf("steps accepted %llu rejected %llu forced %llu rhs %llu\n",
                static_cast<unsigned long long>(st.accepted), static_cast<unsigned long long>(st.rejected),
                static_cast<unsigned long long>(st.forced), static_cast<unsigned long long>(st.rhs_evals));
    print_summary(result.summary);
    return ok;
}

int cmd_sweep(const Globals& g, const fs::path& config_path) {
    SweepSpec spec = load_sweep_spec(config_path);
    if (g.seed) spec.base.seed = *g.seed;
    if (g.workers) spec.workers = *g.workers;
    spec.validate();
    fs::create_directories(g.out_dir);
    const auto rows = run_sweep(spec, g.out_dir, [](const SweepRow& row) {
        std::fprintf(stderr, "run %zu r=%g J=%g K=%g rep=%zu: %s\n", row.index, row.point.r, row.point.J,
                     row.point.K, row.replicate,
                     row.ok ? std::string(to_string(row.summary.label)).c_str() : row.error.c_str());
    });
    const fs::path table = g.out_dir / "sweep.csv";
    write_text_file(table, sweep_table(rows));
    std::size_t failed = 0;
    for (const auto& row : rows) failed += row.ok ? 0 : 1;
    std::printf("wrote %s (%zu rows, %zu failed)\n", table.string().c_str(), rows.size(), failed);
    return ok;
}

int cmd_classify(const fs::path& trajectory, std::optional<double> window) {
    const Trajectory traj = read_trajectory(trajectory);
    ClassifierConfig cc;
    double w = 0.1 * traj.integrator.t_end;
    if (const auto cfg = sidecar_config(trajectory)) {
        cc = cfg->classifier;
        w = cfg->window();
    }
    if (window) w = *window;
    print_summary(classify(traj, w, cc));
    return ok;
}

int cmd_plot(const Globals& g, const fs::path& trajectory, const std::string& mode, std::optional<double> at,
             std::optional<fs::path> out) {
    const PlotMode m = parse_plot_mode(mode);
    const Trajectory traj = read_trajectory(trajectory);
    const double t = at.value_or(traj.integrator.t_end);
    fs::path path;
    if (out) {
        path = *out;
    } else {
        char name[64];
        std::snprintf(name, sizeof name, "plot_%s_t%g.svg", std::string(to_string(m)).c_str(), t);
        fs::create_directories(g.out_dir);
        path = g.out_dir / name;
    }
    write_text_file(path, render_scatter(traj, m, t));
    std::printf("wrote %s\n", path.string().c_str());
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Swarmalator simulations: Vicsek and Cucker-Smale variants"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    auto* seed_opt = app.add_option("--seed", seed, "Override the config seed")->configurable(false);
    app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
    auto* workers_opt = app.add_option("--workers", workers, "Concurrent sweep runs")->check(CLI::PositiveNumber);

    fs::path config_path, trajectory;
    std::string mode = "spatial";
    double at = 0.0, window = 0.0;
    fs::path plot_out;

    auto* sim = app.add_subcommand("simulate", "Run one simulation from a config file")->fallthrough();
    sim->add_option("config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a sweep file")->fallthrough();
    sweep->add_option("config", config_path, "Sweep config (JSON)")->required()->check(CLI::ExistingFile);

    auto* cls = app.add_subcommand("classify", "Summarize and label a stored trajectory")->fallthrough();
    cls->add_option("trajectory", trajectory, "Trajectory CSV")->required()->check(CLI::ExistingFile);
    auto* window_opt = cls->add_option("--window", window, "Tail window in time units (default from sidecar)");

    auto* plot = app.add_subcommand("plot", "Render a scatter plot of one sample as SVG")->fallthrough();
    plot->add_option("trajectory", trajectory, "Trajectory CSV")->required()->check(CLI::ExistingFile);
    plot->add_option("--mode", mode, "spatial or psi-xi")->check(CLI::IsMember({"spatial", "psi-xi"}));
    auto* at_opt = plot->add_option("--at", at, "Time of the sample (nearest is used; default t_end)");
    auto* out_opt = plot->add_option("-o,--output", plot_out, "Output SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : config_error;
    }
    if (*seed_opt) g.seed = seed;
    if (*workers_opt) g.workers = workers;

    try {
        if (*sim) return cmd_simulate(g, config_path);
        if (*sweep) return cmd_sweep(g, config_path);
        if (*cls) return cmd_classify(trajectory, *window_opt ? std::optional(window) : std::nullopt);
        if (*plot) {
            return cmd_plot(g, trajectory, mode, *at_opt ? std::optional(at) : std::nullopt,
                            *out_opt ? std::optional(plot_out) : std::nullopt);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const SolverError& e) {
        std::cerr << "solver error at t=" << e.time() << ": " << e.what() << '\n';
        return solver_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return failure;
}
