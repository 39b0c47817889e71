#pragma once

#include <string>

#include "swarmalator/config.hpp"
#include "swarmalator/integrator.hpp"

namespace swarm {

/// Index of the sample nearest to time `at` (ties go to the earlier sample).
std::size_t nearest_sample(const Trajectory& traj, double at);

/// Cyclic hue map for an angle: "hsl(h,75%,45%)" with h = (a + pi) / 2pi * 360.
std::string angle_color(double a);

/// Scatter plot as a standalone SVG document with one <circle> per agent.
///  spatial: (x, y) colored by phase.
///  psi-xi:  (psi, xi), psi measured about the centroid, colored by heading (Vicsek) or velocity
///           angle (Cucker-Smale); baseline agents are colored by phase.
/// Every circle carries data-u / data-v attributes with the plotted values.
std::string render_scatter(const Trajectory& traj, PlotMode mode, double at);

}  // namespace swarm
