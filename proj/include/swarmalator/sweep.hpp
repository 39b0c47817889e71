#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmalator/config.hpp"

namespace swarm {

/// per_run: every row gets its own seed derived from (base seed, row index).
/// per_replicate: replicate k uses the same derived seed at every grid point, so a replicate is one
/// initial condition followed across the grid.
enum class SeedMode { per_run, per_replicate };

std::string_view to_string(SeedMode m);
SeedMode parse_seed_mode(std::string_view name);

struct SweepPoint {
    double r{0.0};
    double J{0.0};
    double K{0.0};
};

struct SweepSpec {
    SimConfig base;
    std::vector<double> r;  // empty axis: base value
    std::vector<double> J;
    std::vector<double> K;
    std::size_t replicates{1};
    SeedMode seed_mode{SeedMode::per_run};
    std::size_t workers{1};
    bool keep_runs{false};  // write each run's outputs under runs/<index>/

    void validate() const;
};

/// Grid in row order: r outermost, then J, then K.
std::vector<SweepPoint> grid_points(const SweepSpec& spec);

/// Inclusive arithmetic range; values are rounded to 12 decimals so 0.2 + 3 * 0.05 prints as 0.35.
std::vector<double> linear_range(double from, double to, double step);

struct SweepRow {
    std::size_t index{0};
    SweepPoint point;
    std::size_t replicate{0};
    std::uint64_t seed{0};
    bool ok{false};
    std::string error;
    ObservableSummary summary;
    SolverStats stats;
};

/// Seed of row `index` (replicate `replicate`) under the spec's seed mode.
std::uint64_t row_seed(const SweepSpec& spec, std::size_t index, std::size_t replicate);

/// Config of one run: the base config with the point's parameters and the row seed.
SimConfig run_config(const SweepSpec& spec, const SweepPoint& point, std::uint64_t seed);

/// Runs |grid| x replicates simulations on up to spec.workers threads. A failing run is recorded in its
/// row. Rows come back in grid order (point-major, replicate-minor). `on_done` is called from worker
/// threads, serialized by an internal lock.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir = {},
                                const std::function<void(const SweepRow&)>& on_done = {});

/// Delimited summary table with a header row.
std::string sweep_table(const std::vector<SweepRow>& rows);

SweepSpec parse_sweep_spec(const nlohmann::json& j);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

}  // namespace swarm
