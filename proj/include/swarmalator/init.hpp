#pragma once

#include <cstdint>

#include "swarmalator/model.hpp"

namespace swarm {

/// Counter-based generator: every draw is a pure function of (seed, agent index, field tag), so initial
/// conditions do not depend on N or on the order in which agents are generated.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t agent, std::uint64_t tag) const;
    /// Uniform in [0, 1) with 53 random bits.
    double uniform(std::uint64_t agent, std::uint64_t tag) const;
    double uniform(std::uint64_t agent, std::uint64_t tag, double lo, double hi) const {
        return lo + (hi - lo) * uniform(agent, tag);
    }

private:
    std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for run `index` of a family seeded by `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct InitSpec {
    double box_length{1.0};       // positions uniform in [-L/2, L/2]^2
    double velocity_half_width{0.1};

    void validate() const;
};

/// Phases uniform in [-pi, pi], headings uniform in [0, 2pi) then wrapped, velocities uniform in the
/// square of the given half-width.
SystemState init_random(ModelId model, const InitSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace swarm
