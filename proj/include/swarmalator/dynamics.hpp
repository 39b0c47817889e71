#pragma once

#include <span>
#include <vector>

#include "swarmalator/model.hpp"
#include "swarmalator/neighbors.hpp"

namespace swarm {

// Time derivatives, one row per agent, mirroring the agent state layout.
struct RateBaseline {
    Vec2 dx;
    double dxi{0.0};
};

struct RateSV {
    Vec2 dx;
    double dtheta{0.0};
    double dxi{0.0};
};

struct RateSCS {
    Vec2 dx;
    Vec2 dv;
    double dxi{0.0};
};

// Evaluation order is fixed, so results are bit-reproducible for a given build. Pairs closer than
// kCoincidentDistance contribute no spatial or phase terms.

/// All-to-all first-order swarmalator with 1/N normalization. Requires N >= 2.
void rhs_baseline(std::span<const AgentBaseline> agents, const ModelParams& p, std::span<RateBaseline> out);
std::vector<RateBaseline> rhs_baseline(std::span<const AgentBaseline> agents, const ModelParams& p);

/// Swarmalator-Vicsek: averages over the closed-ball neighborhoods in `nl` (built with radius p.r).
void rhs_sv(std::span<const AgentSV> agents, const ModelParams& p, const NeighborList& nl, std::span<RateSV> out);
std::vector<RateSV> rhs_sv(std::span<const AgentSV> agents, const ModelParams& p, const NeighborList& nl);

/// Swarmalator-Cucker-Smale with global 1/N coupling. Requires N >= 2.
void rhs_scs(std::span<const AgentSCS> agents, const ModelParams& p, std::span<RateSCS> out);
std::vector<RateSCS> rhs_scs(std::span<const AgentSCS> agents, const ModelParams& p);

}  // namespace swarm
