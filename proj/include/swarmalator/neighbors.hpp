#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "swarmalator/model.hpp"

namespace swarm {

/// Closed-ball neighborhoods stored in compressed-row form. Each row is sorted ascending.
class NeighborList {
public:
    NeighborList() = default;
    NeighborList(std::vector<std::size_t> offsets, std::vector<std::uint32_t> indices, double radius,
                 bool include_self);

    std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::span<const std::uint32_t> of(std::size_t i) const {
        return {indices_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::size_t count(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
    double radius() const { return radius_; }
    bool include_self() const { return include_self_; }
    std::size_t total_entries() const { return indices_.size(); }

    friend bool operator==(const NeighborList&, const NeighborList&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> indices_;
    double radius_{0.0};
    bool include_self_{true};
};

/// O(N^2) reference scan. Throws std::invalid_argument on radius <= 0 or non-finite coordinates.
NeighborList neighbors_naive(std::span<const Vec2> positions, double radius, bool include_self = true);

/// Uniform-grid search with cells slightly wider than the radius and a 3x3 stencil.
/// Produces exactly the same list as neighbors_naive.
NeighborList neighbors_grid(std::span<const Vec2> positions, double radius, bool include_self = true);

}  // namespace swarm
