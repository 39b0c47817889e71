#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "swarmalator/integrator.hpp"
#include "swarmalator/model.hpp"

namespace swarm {

enum class StateLabel {
    static_sync,
    static_async,
    static_phase_wave,
    splintered_phase_wave,
    active_phase_wave,
    gradient,
    clustered,
    unclassified,
};

std::string_view to_string(StateLabel label);
StateLabel parse_state_label(std::string_view name);

/// |mean of e^{i a_k}|. Throws std::invalid_argument on an empty list.
double kuramoto_R(std::span<const double> phases);

/// Heading coherence over angles; 0 for an empty list.
double heading_R(std::span<const double> headings);

/// Velocity polarization: coherence of the polar angles of the non-zero velocities (0 if none).
double heading_R(std::span<const Vec2> velocities);

struct PhaseWave {
    double plus{0.0};
    double minus{0.0};
    double max() const { return plus > minus ? plus : minus; }
};

/// S+- = |mean e^{i(psi_k +- xi_k)}| with psi measured about the centroid. Agents within 1e-12 of the
/// centroid are skipped (the mean is still over N). Throws std::invalid_argument if every agent is there.
PhaseWave phase_wave_S(std::span<const Vec2> positions, std::span<const double> phases);

/// Connected components of the graph joining pairs that are close in both space and phase.
/// Components with fewer than `min_size` agents are not counted.
std::size_t cluster_count(std::span<const Vec2> positions, std::span<const double> phases, double eps_x,
                          double eps_xi, std::size_t min_size = 1);

/// Largest pairwise distance.
double pattern_diameter(std::span<const Vec2> positions);

/// Mean over agents of the phase coherence of the agents within `radius` of each agent (itself included).
double local_phase_coherence(std::span<const Vec2> positions, std::span<const double> phases, double radius);

/// Mean per-agent speed in the centroid frame, estimated by a finite difference between two snapshots.
double relative_speed(std::span<const Vec2> before, std::span<const Vec2> after, double dt);

struct ClassifierConfig {
    double box_length{1.0};
    double static_factor{1e-3};   // static if relative speed < static_factor * box_length
    double tau_R{0.9};            // synchrony
    double tau_S{0.7};            // phase wave
    double tau_async{0.3};        // incoherent phases
    double tau_local{0.8};        // local phase coherence of a gradient
    double tau_clusters{2.0};     // fewest clusters that count as splintered
    double min_cluster_fraction{0.02};  // smaller components are stragglers, not clusters
    double eps_x_fraction{0.1};   // cluster linking distance as a fraction of the pattern diameter
    double eps_xi{kPi / 8.0};     // cluster linking phase difference

    double tau_static() const { return static_factor * box_length; }
    /// Smallest component counted as a cluster among n agents (at least 2 when n >= 2).
    std::size_t min_cluster_size(std::size_t n) const;
};

struct ObservableSummary {
    double t{0.0};
    double R_phase{0.0};
    double R_heading{0.0};  // heading coherence (Vicsek) or velocity polarization (Cucker-Smale)
    double S_plus{0.0};
    double S_minus{0.0};
    std::size_t n_clusters{1};
    double mean_speed{0.0};   // centroid-frame speed over the summarized window
    double local_R{0.0};
    double diameter{0.0};
    StateLabel label{StateLabel::unclassified};
};

/// Order parameters of one snapshot. mean_speed is left at 0 and label unclassified.
ObservableSummary snapshot_summary(const SystemState& state, const ClassifierConfig& cfg = {});

/// Summary over the trailing `window` time units of the trajectory, with its label.
/// Throws std::invalid_argument if the trajectory spans less than 2 * window.
ObservableSummary classify(const Trajectory& traj, double window, const ClassifierConfig& cfg = {});

/// The decision tree alone, applied to precomputed statistics.
StateLabel decide(const ObservableSummary& s, std::size_t n_agents, const ClassifierConfig& cfg);

}  // namespace swarm
