#include "swarmalator/init.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace swarm {

namespace {

enum Field : std::uint64_t { kPosX = 1, kPosY = 2, kHeading = 3, kPhase = 4, kVelX = 5, kVelY = 6 };

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t agent, std::uint64_t tag) const {
    return splitmix64(splitmix64(splitmix64(seed_) ^ tag) ^ (agent * 0xd1b54a32d192ed03ULL));
}

double CounterRng::uniform(std::uint64_t agent, std::uint64_t tag) const {
    return static_cast<double>(bits(agent, tag) >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed ^ 0x5851f42d4c957f2dULL) + index);
}

void InitSpec::validate() const {
    if (!(box_length > 0.0) || !std::isfinite(box_length)) {
        throw std::invalid_argument("init.box_length: must be finite and > 0");
    }
    if (!(velocity_half_width >= 0.0) || !std::isfinite(velocity_half_width)) {
        throw std::invalid_argument("init.velocity_half_width: must be finite and >= 0");
    }
}

SystemState init_random(ModelId model, const InitSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n == 0) throw std::invalid_argument("init_random: N must be >= 1");
    const CounterRng rng(seed);
    const double half = 0.5 * spec.box_length;
    const double vw = spec.velocity_half_width;
    auto position = [&](std::size_t i) {
        return Vec2{rng.uniform(i, kPosX, -half, half), rng.uniform(i, kPosY, -half, half)};
    };
    auto phase = [&](std::size_t i) { return wrap_angle(rng.uniform(i, kPhase, -kPi, kPi)); };

    SystemState s;
    switch (model) {
        case ModelId::baseline: {
            std::vector<AgentBaseline> a(n);
            for (std::size_t i = 0; i < n; ++i) a[i] = {position(i), phase(i)};
            s.agents = std::move(a);
            break;
        }
        case ModelId::vicsek: {
            std::vector<AgentSV> a(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = {position(i), wrap_angle(rng.uniform(i, kHeading, 0.0, kTwoPi)), phase(i)};
            }
            s.agents = std::move(a);
            break;
        }
        case ModelId::cucker_smale: {
            std::vector<AgentSCS> a(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = {position(i), {rng.uniform(i, kVelX, -vw, vw), rng.uniform(i, kVelY, -vw, vw)}, phase(i)};
            }
            s.agents = std::move(a);
            break;
        }
    }
    return s;
}

}  // namespace swarm
