#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmalator/init.hpp"
#include "swarmalator/integrator.hpp"
#include "swarmalator/model.hpp"
#include "swarmalator/observables.hpp"

namespace swarm {

/// Invalid configuration. field() is the dotted path of the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& why)
        : std::invalid_argument(field + ": " + why), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class PlotMode { spatial, psi_xi };

std::string_view to_string(PlotMode m);
PlotMode parse_plot_mode(std::string_view name);

struct PlotRequest {
    PlotMode mode{PlotMode::spatial};
    std::optional<double> at;  // defaults to the final sample
};

struct SimConfig {
    ModelId model{ModelId::vicsek};
    std::size_t n{0};
    std::uint64_t seed{0};
    ModelParams params;
    InitSpec init;
    IntegratorConfig integrator;
    ClassifierConfig classifier;
    std::optional<double> classify_window;  // defaults to 10% of t_end
    bool write_trajectory{true};
    bool write_summary{true};
    bool write_plots{false};
    std::vector<PlotRequest> plots;

    double window() const { return classify_window.value_or(0.1 * integrator.t_end); }
    /// Throws ConfigError.
    void validate() const;
};

/// Strict parse: required keys are model, N, seed, params, integrator.t_end; unknown keys are errors.
SimConfig parse_sim_config(const nlohmann::json& j);
SimConfig load_sim_config(const std::filesystem::path& path);
nlohmann::json to_json(const SimConfig& cfg);

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const IntegratorConfig& c);
nlohmann::json to_json(const SolverStats& s);
nlohmann::json to_json(const ObservableSummary& s);
ModelParams params_from_json(const nlohmann::json& j, const std::string& where = "params");
IntegratorConfig integrator_from_json(const nlohmann::json& j, const std::string& where = "integrator");

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace swarm
