#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "swarmalator/integrator.hpp"
#include "swarmalator/observables.hpp"

namespace swarm {

/// Version string written into every metadata sidecar and plot.
std::string_view artifact_version();

/// Sidecar path for a trajectory file: "<path>.meta.json".
std::filesystem::path metadata_path(const std::filesystem::path& trajectory);

/// Writes the delimited trajectory table (one row per sample time and agent, 17 significant digits) and
/// its metadata sidecar. `extra` is merged into the sidecar (typically the full run config).
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                      const nlohmann::json& extra = nlohmann::json::object());

/// Reads a trajectory written by write_trajectory, including model, parameters and seed from the sidecar.
Trajectory read_trajectory(const std::filesystem::path& path);

/// Column names for a model's trajectory table.
std::string trajectory_header(ModelId model);

/// 17 significant digits; parses back to the same double.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace swarm
