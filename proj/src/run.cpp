#include "swarmalator/run.hpp"

#include <cstdio>

#include "swarmalator/init.hpp"
#include "swarmalator/io.hpp"
#include "swarmalator/plot.hpp"

namespace swarm {

using nlohmann::json;

RunResult run_simulation(const SimConfig& cfg) {
    cfg.validate();
    const SystemState initial = init_random(cfg.model, cfg.init, cfg.n, cfg.seed);
    RunResult out;
    out.trajectory = integrate(initial, cfg.params, cfg.integrator, cfg.seed);
    out.summary = classify(out.trajectory, cfg.window(), cfg.classifier);
    return out;
}

json summary_json(const SimConfig& cfg, const RunResult& result) {
    return {{"artifact_version", std::string(artifact_version())},
            {"model", std::string(to_string(cfg.model))},
            {"N", cfg.n},
            {"seed", cfg.seed},
            {"window", cfg.window()},
            {"summary", to_json(result.summary)},
            {"solver_stats", to_json(result.trajectory.stats)},
            {"config", to_json(cfg)}};
}

namespace {

std::string plot_name(const PlotRequest& req, double at) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "plot_%s_t%g.svg", std::string(to_string(req.mode)).c_str(), at);
    return buf;
}

}  // namespace

std::vector<std::filesystem::path> write_run_outputs(const SimConfig& cfg, const RunResult& result,
                                                     const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    if (cfg.write_trajectory) {
        const auto path = out_dir / "trajectory.csv";
        write_trajectory(path, result.trajectory, {{"config", to_json(cfg)}});
        written.push_back(path);
        written.push_back(metadata_path(path));
    }
    if (cfg.write_summary) {
        const auto path = out_dir / "summary.json";
        write_text_file(path, summary_json(cfg, result).dump(2) + "\n");
        written.push_back(path);
    }
    if (cfg.write_plots) {
        for (const PlotRequest& req : cfg.plots) {
            const double at = req.at.value_or(cfg.integrator.t_end);
            const auto path = out_dir / plot_name(req, at);
            write_text_file(path, render_scatter(result.trajectory, req.mode, at));
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace swarm
