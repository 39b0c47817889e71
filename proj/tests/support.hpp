#pragma once

// Shared by the unit tests and the acceptance binary: seeded generators for random states and an
// independent double-loop evaluation of the three right-hand sides.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "swarmalator/dynamics.hpp"
#include "swarmalator/model.hpp"

namespace oracle {

using swarm::AgentBaseline;
using swarm::AgentSCS;
using swarm::AgentSV;
using swarm::ModelParams;
using swarm::Vec2;

inline constexpr double pi = 3.141592653589793238462643383279502884;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
    }
    Vec2 point(double half) { return {uniform(-half, half), uniform(-half, half)}; }
    double angle() { return uniform(-pi, pi); }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline ModelParams random_params(Gen& g) {
    ModelParams p;
    p.A = g.uniform(0.5, 2.0);
    p.B = g.uniform(0.5, 2.0);
    p.J = g.uniform(-1.0, 1.0);
    p.K = g.uniform(-1.5, 1.5);
    p.r = g.uniform(0.2, 1.5);
    p.v0 = g.uniform(0.0, 0.01);
    p.omega = g.uniform(-0.5, 0.5);
    p.cs_H = g.uniform(0.0, 2.0);
    p.cs_beta = g.uniform(0.0, 2.0);
    return p;
}

inline std::vector<AgentBaseline> random_baseline(Gen& g, std::size_t n, double half = 1.0) {
    std::vector<AgentBaseline> a(n);
    for (auto& s : a) s = {g.point(half), g.angle()};
    return a;
}

inline std::vector<AgentSV> random_sv(Gen& g, std::size_t n, double half = 1.0) {
    std::vector<AgentSV> a(n);
    for (auto& s : a) s = {g.point(half), g.angle(), g.angle()};
    return a;
}

inline std::vector<AgentSCS> random_scs(Gen& g, std::size_t n, double half = 1.0) {
    std::vector<AgentSCS> a(n);
    for (auto& s : a) s = {g.point(half), g.point(0.1), g.angle()};
    return a;
}

// Circular difference in (-pi, pi], written independently of the library's wrap_angle.
inline double circ(double d) {
    double w = std::fmod(d, 2.0 * pi);
    if (w > pi) w -= 2.0 * pi;
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

inline std::vector<swarm::RateBaseline> rhs_baseline(const std::vector<AgentBaseline>& a, const ModelParams& p) {
    const std::size_t n = a.size();
    std::vector<swarm::RateBaseline> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double fx = 0, fy = 0, fxi = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = a[j].x.x - a[i].x.x, dy = a[j].x.y - a[i].x.y;
            const double d = std::hypot(dx, dy);
            if (d < 1e-9) continue;
            const double s = a[j].xi - a[i].xi;
            const double coef = (p.A + p.J * std::cos(s)) / d - p.B / (d * d);
            fx += coef * dx;
            fy += coef * dy;
            fxi += p.K * std::sin(s) / d;
        }
        out[i].dx = {fx / n, fy / n};
        out[i].dxi = p.omega_of(i) + fxi / n;
    }
    return out;
}

inline std::vector<swarm::RateSV> rhs_sv(const std::vector<AgentSV>& a, const ModelParams& p) {
    const std::size_t n = a.size();
    std::vector<swarm::RateSV> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double fx = 0, fy = 0, fth = 0, fxi = 0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = a[j].x.x - a[i].x.x, dy = a[j].x.y - a[i].x.y;
            if (dx * dx + dy * dy > p.r * p.r) continue;
            if (j == i && !p.include_self) continue;
            ++count;
            if (j == i) continue;
            fth += circ(a[j].theta - a[i].theta);
            const double d = std::hypot(dx, dy);
            if (d < 1e-9) continue;
            const double s = a[j].xi - a[i].xi;
            const double coef = (p.A + p.J * std::cos(s)) / d - p.B / (d * d);
            fx += coef * dx;
            fy += coef * dy;
            fxi += p.K * std::sin(s) / d;
        }
        const double w = count ? 1.0 / static_cast<double>(count) : 0.0;
        out[i].dx = {p.v0 * std::cos(a[i].theta) + w * fx, p.v0 * std::sin(a[i].theta) + w * fy};
        out[i].dtheta = w * fth;
        out[i].dxi = p.omega_of(i) + w * fxi;
    }
    return out;
}

inline std::vector<swarm::RateSCS> rhs_scs(const std::vector<AgentSCS>& a, const ModelParams& p) {
    const std::size_t n = a.size();
    std::vector<swarm::RateSCS> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double fx = 0, fy = 0, fxi = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = a[j].x.x - a[i].x.x, dy = a[j].x.y - a[i].x.y;
            const double d = std::hypot(dx, dy);
            const double rate = p.cs_H / std::pow(1.0 + d * d, p.cs_beta);
            fx += rate * (a[j].v.x - a[i].v.x);
            fy += rate * (a[j].v.y - a[i].v.y);
            if (d < 1e-9) continue;
            const double s = a[j].xi - a[i].xi;
            const double coef = (p.A + p.J * std::cos(s)) / d - p.B / (d * d);
            fx += coef * dx;
            fy += coef * dy;
            fxi += p.K * std::sin(s) / d;
        }
        out[i].dx = a[i].v;
        out[i].dv = {fx / n, fy / n};
        out[i].dxi = p.omega_of(i) + fxi / n;
    }
    return out;
}

// Relative difference with a floor so that near-zero components compare absolutely.
inline double rel_diff(double a, double b, double floor = 1.0) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace oracle
