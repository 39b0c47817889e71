#include "swarmalator/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace swarm {

NeighborList::NeighborList(std::vector<std::size_t> offsets, std::vector<std::uint32_t> indices, double radius,
                           bool include_self)
    : offsets_(std::move(offsets)), indices_(std::move(indices)), radius_(radius), include_self_(include_self) {}

namespace {

void check_inputs(std::span<const Vec2> positions, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("neighbor search: radius must be finite and > 0");
    }
    if (positions.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("neighbor search: too many agents");
    }
    for (const auto& p : positions) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw std::invalid_argument("neighbor search: non-finite coordinate");
        }
    }
}

// Both searches must use this exact predicate so their outputs agree bit for bit.
inline bool within(const Vec2& a, const Vec2& b, double r2) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    return dx * dx + dy * dy <= r2;
}

// Agents bucketed by cell. Dense storage when the bounding box has few cells, otherwise a sorted
// (cx, cy) list searched by bisection.
class CellIndex {
public:
    static CellIndex dense(std::span<const Vec2> pos, double xmin, double ymin, double cell, std::int64_t ncx,
                           std::int64_t ncy) {
        CellIndex g;
        g.dense_ = true;
        g.ncx_ = ncx;
        g.ncy_ = ncy;
        g.cells_.resize(pos.size());
        std::vector<std::size_t> count(static_cast<std::size_t>(ncx * ncy) + 1, 0);
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const auto cx = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor((pos[i].x - xmin) / cell)), ncx - 1);
            const auto cy = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor((pos[i].y - ymin) / cell)), ncy - 1);
            g.cells_[i] = {cx, cy, static_cast<std::uint32_t>(i)};
            ++count[static_cast<std::size_t>(cx * ncy + cy) + 1];
        }
        for (std::size_t c = 1; c < count.size(); ++c) count[c] += count[c - 1];
        g.start_ = count;
        g.members_.resize(pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const auto& e = g.cells_[i];
            g.members_[count[static_cast<std::size_t>(e.cx * ncy + e.cy)]++] = static_cast<std::uint32_t>(i);
        }
        return g;
    }

    static CellIndex sparse(std::span<const Vec2> pos, double xmin, double ymin, double cell) {
        CellIndex g;
        g.cells_.resize(pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i) {
            g.cells_[i] = {static_cast<std::int64_t>(std::floor((pos[i].x - xmin) / cell)),
                           static_cast<std::int64_t>(std::floor((pos[i].y - ymin) / cell)),
                           static_cast<std::uint32_t>(i)};
        }
        g.sorted_ = g.cells_;
        std::sort(g.sorted_.begin(), g.sorted_.end(), key_less);
        return g;
    }

    template <typename F>
    void for_each_candidate(std::size_t i, F&& f) const {
        const Entry& me = cells_[i];
        if (dense_) {
            for (std::int64_t cx = std::max<std::int64_t>(me.cx - 1, 0); cx <= std::min(me.cx + 1, ncx_ - 1); ++cx) {
                const std::int64_t lo_y = std::max<std::int64_t>(me.cy - 1, 0);
                const std::int64_t hi_y = std::min(me.cy + 1, ncy_ - 1);
                // Cells (cx, lo_y..hi_y) are contiguous.
                const std::size_t first = start_[static_cast<std::size_t>(cx * ncy_ + lo_y)];
                const std::size_t last = start_[static_cast<std::size_t>(cx * ncy_ + hi_y) + 1];
                for (std::size_t k = first; k < last; ++k) f(members_[k]);
            }
            return;
        }
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            const Entry lo{me.cx + dx, me.cy - 1, 0};
            const Entry hi{me.cx + dx, me.cy + 1, std::numeric_limits<std::uint32_t>::max()};
            auto first = std::lower_bound(sorted_.begin(), sorted_.end(), lo, key_less);
            auto last = std::upper_bound(first, sorted_.end(), hi, key_less);
            for (auto it = first; it != last; ++it) f(it->idx);
        }
    }

private:
    struct Entry {
        std::int64_t cx;
        std::int64_t cy;
        std::uint32_t idx;
    };
    static bool key_less(const Entry& a, const Entry& b) {
        return a.cx != b.cx ? a.cx < b.cx : (a.cy != b.cy ? a.cy < b.cy : a.idx < b.idx);
    }

    bool dense_{false};
    std::int64_t ncx_{0}, ncy_{0};
    std::vector<Entry> cells_;     // per agent
    std::vector<Entry> sorted_;    // sparse mode
    std::vector<std::size_t> start_;
    std::vector<std::uint32_t> members_;
};

}  // namespace

NeighborList neighbors_naive(std::span<const Vec2> positions, double radius, bool include_self) {
    check_inputs(positions, radius);
    const std::size_t n = positions.size();
    const double r2 = radius * radius;
    std::vector<std::size_t> offsets{0};
    offsets.reserve(n + 1);
    std::vector<std::uint32_t> indices;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                if (include_self) indices.push_back(static_cast<std::uint32_t>(j));
                continue;
            }
            if (within(positions[i], positions[j], r2)) indices.push_back(static_cast<std::uint32_t>(j));
        }
        offsets.push_back(indices.size());
    }
    return {std::move(offsets), std::move(indices), radius, include_self};
}

NeighborList neighbors_grid(std::span<const Vec2> positions, double radius, bool include_self) {
    check_inputs(positions, radius);
    const std::size_t n = positions.size();
    if (n == 0) return {{0}, {}, radius, include_self};

    double xmin = positions[0].x, ymin = positions[0].y, xmax = xmin, ymax = ymin;
    for (const auto& p : positions) {
        xmin = std::min(xmin, p.x);
        ymin = std::min(ymin, p.y);
        xmax = std::max(xmax, p.x);
        ymax = std::max(ymax, p.y);
    }
    // Cells are padded so rounding in the cell index can never separate a pair at distance <= radius
    // by more than one cell.
    const double cell = radius * (1.0 + 1e-9) + 1e-14 * std::max(xmax - xmin, ymax - ymin);
    const double span_x = std::floor((xmax - xmin) / cell);
    const double span_y = std::floor((ymax - ymin) / cell);
    const CellIndex grid = (span_x + 1.0) * (span_y + 1.0) <= static_cast<double>(std::max<std::size_t>(16 * n, 4096))
                               ? CellIndex::dense(positions, xmin, ymin, cell, static_cast<std::int64_t>(span_x) + 1,
                                                  static_cast<std::int64_t>(span_y) + 1)
                               : CellIndex::sparse(positions, xmin, ymin, cell);

    // Visiting j in ascending order and appending j to every row i that contains it leaves each row
    // sorted without a sort.
    const double r2 = radius * radius;
    std::vector<std::vector<std::uint32_t>> rows(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<std::uint32_t>(j);
        grid.for_each_candidate(j, [&](std::uint32_t i) {
            if (i == j) {
                if (include_self) rows[i].push_back(jj);
            } else if (within(positions[i], positions[j], r2)) {
                rows[i].push_back(jj);
            }
        });
    }
    std::vector<std::size_t> offsets(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + rows[i].size();
    std::vector<std::uint32_t> indices;
    indices.reserve(offsets[n]);
    for (const auto& row : rows) indices.insert(indices.end(), row.begin(), row.end());
    return {std::move(offsets), std::move(indices), radius, include_self};
}

}  // namespace swarm
