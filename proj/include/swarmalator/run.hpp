#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "swarmalator/config.hpp"
#include "swarmalator/integrator.hpp"
#include "swarmalator/observables.hpp"

namespace swarm {

struct RunResult {
    Trajectory trajectory;
    ObservableSummary summary;
};

/// Draws the initial state, integrates and classifies the tail window. Throws SolverError on blow-up.
RunResult run_simulation(const SimConfig& cfg);

/// Contents of summary.json: the final summary plus the settings that produced it.
nlohmann::json summary_json(const SimConfig& cfg, const RunResult& result);

/// Writes the outputs requested by cfg into `out_dir` (created if needed) and returns their paths:
/// trajectory.csv (+ sidecar), summary.json, and one SVG per plot request.
std::vector<std::filesystem::path> write_run_outputs(const SimConfig& cfg, const RunResult& result,
                                                     const std::filesystem::path& out_dir);

}  // namespace swarm
