#include <doctest.h>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "support.hpp"
#include "swarmalator/neighbors.hpp"

using namespace swarm;

namespace {

std::vector<std::vector<std::uint32_t>> rows(const NeighborList& nl) {
    std::vector<std::vector<std::uint32_t>> out;
    for (std::size_t i = 0; i < nl.size(); ++i) out.emplace_back(nl.of(i).begin(), nl.of(i).end());
    return out;
}

using Rows = std::vector<std::vector<std::uint32_t>>;

}  // namespace

TEST_CASE("hand-checked neighborhoods") {
    const std::vector<Vec2> one{{0, 0}};
    CHECK(rows(neighbors_naive(one, 1.0)) == Rows{{0}});
    CHECK(rows(neighbors_grid(one, 1.0)) == Rows{{0}});

    const std::vector<Vec2> three{{0, 0}, {0.5, 0}, {1.2, 0}};
    // |x2 - x1| = 0.5 is inside; 0.7 and 1.2 are outside 0.65.
    const Rows expected{{0, 1}, {0, 1}, {2}};
    CHECK(rows(neighbors_naive(three, 0.65)) == expected);
    CHECK(rows(neighbors_grid(three, 0.65)) == expected);

    const std::vector<Vec2> pair{{0, 0}, {2, 0}};
    CHECK(rows(neighbors_naive(pair, 2.0, false)) == Rows{{1}, {0}});
    CHECK(rows(neighbors_grid(pair, 2.0, false)) == Rows{{1}, {0}});
}

TEST_CASE("grid equals naive on uniform and clustered points") {
    oracle::Gen g(21);
    std::vector<Vec2> uniform(300);
    for (auto& x : uniform) x = g.point(0.5);
    CHECK(neighbors_grid(uniform, 0.65) == neighbors_naive(uniform, 0.65));

    std::vector<Vec2> clustered(500);
    for (auto& x : clustered) x = Vec2{3.0, -2.0} + g.point(0.05);
    CHECK(neighbors_grid(clustered, 0.2) == neighbors_naive(clustered, 0.2));
    CHECK(neighbors_grid(clustered, 0.2, false) == neighbors_naive(clustered, 0.2, false));
}

TEST_CASE("grid equals naive on points placed exactly at the radius") {
    // Lattice spacing equal to the radius puts many pairs on the boundary.
    for (double r : {0.1, 0.25, 0.3, 1.0 / 3.0}) {
        std::vector<Vec2> lattice;
        for (int a = -6; a <= 6; ++a) {
            for (int b = -6; b <= 6; ++b) lattice.push_back({a * r, b * r});
        }
        CHECK(neighbors_grid(lattice, r) == neighbors_naive(lattice, r));
    }
}

TEST_CASE("list invariants: membership, symmetry, order") {
    oracle::Gen g(22);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = g.index(1, 200);
        const double r = g.uniform(0.05, 2.0);
        const bool self = trial % 2 == 0;
        std::vector<Vec2> x(n);
        for (auto& p : x) p = g.point(g.uniform(0.1, 3.0));
        const NeighborList nl = neighbors_grid(x, r, self);
        REQUIRE(nl.size() == n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = nl.of(i);
            REQUIRE(std::is_sorted(row.begin(), row.end()));
            REQUIRE(std::adjacent_find(row.begin(), row.end()) == row.end());
            for (std::size_t j = 0; j < n; ++j) {
                const bool listed = std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(j));
                const bool expected = j == i ? self : (x[j] - x[i]).norm2() <= r * r;
                REQUIRE(listed == expected);
                if (j != i) {
                    const auto back = nl.of(j);
                    REQUIRE(listed == std::binary_search(back.begin(), back.end(), static_cast<std::uint32_t>(i)));
                }
            }
        }
    }
}

TEST_CASE("monotone in radius and translation invariant") {
    oracle::Gen g(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec2> x(g.index(2, 300));
        for (auto& p : x) p = g.point(1.0);
        const double r1 = g.uniform(0.05, 1.0), r2 = r1 + g.uniform(0.0, 1.0);
        const NeighborList a = neighbors_grid(x, r1), b = neighbors_grid(x, r2);
        for (std::size_t i = 0; i < x.size(); ++i) {
            REQUIRE(std::includes(b.of(i).begin(), b.of(i).end(), a.of(i).begin(), a.of(i).end()));
        }
        // A shift by a dyadic vector is exact in floating point, so distances are unchanged.
        std::vector<Vec2> shifted = x;
        for (auto& p : shifted) p += Vec2{0.5, -0.25};
        REQUIRE(neighbors_grid(shifted, r1) == a);
    }
}

TEST_CASE("input checks") {
    const std::vector<Vec2> x{{0, 0}, {1, 1}};
    CHECK_THROWS_AS(neighbors_naive(x, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(neighbors_grid(x, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(neighbors_grid(x, std::numeric_limits<double>::infinity()), std::invalid_argument);
    const std::vector<Vec2> bad{{0, 0}, {std::numeric_limits<double>::quiet_NaN(), 0}};
    CHECK_THROWS_AS(neighbors_naive(bad, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(neighbors_grid(bad, 1.0), std::invalid_argument);
    CHECK(neighbors_grid(std::vector<Vec2>{}, 1.0).size() == 0);
}

TEST_CASE("far-apart points use the sparse cell index") {
    oracle::Gen g(24);
    std::vector<Vec2> x(400);
    for (auto& p : x) p = g.point(1e4);
    for (std::size_t k = 0; k < 50; ++k) x.push_back(x[k] + g.point(0.01));
    CHECK(neighbors_grid(x, 0.02) == neighbors_naive(x, 0.02));
}
