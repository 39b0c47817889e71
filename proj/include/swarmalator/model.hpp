#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace swarm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Pairs closer than this contribute no spatial or phase coupling.
inline constexpr double kCoincidentDistance = 1e-9;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;

    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    double angle() const { return std::atan2(y, x); }
};

enum class ModelId { baseline, vicsek, cucker_smale };

std::string_view to_string(ModelId id);
/// Accepts "baseline-swarmalator", "swarmalator-vicsek", "swarmalator-cucker-smale".
ModelId parse_model_id(std::string_view name);

/// Kernel and dynamics constants shared by all three models.
struct ModelParams {
    double A{1.0};
    double B{1.0};
    double J{0.0};
    double K{0.0};
    double r{1.0};       // interaction radius (Vicsek model only)
    double v0{0.003};    // self-propulsion speed
    double omega{0.0};   // natural frequency, used unless omega_per_agent is set
    std::vector<double> omega_per_agent;
    double cs_H{1.0};
    double cs_beta{1.0};
    bool include_self{true};  // Vicsek neighborhoods contain the agent itself

    double omega_of(std::size_t i) const {
        return omega_per_agent.empty() ? omega : omega_per_agent[i];
    }

    /// Throws std::invalid_argument naming the offending field.
    void validate(ModelId model, std::size_t n_agents) const;
};

// Agent states. Angles are stored wrapped to (-pi, pi].
struct AgentBaseline {
    Vec2 x;
    double xi{0.0};
};

struct AgentSV {
    Vec2 x;
    double theta{0.0};
    double xi{0.0};
};

struct AgentSCS {
    Vec2 x;
    Vec2 v;
    double xi{0.0};
};

using AgentList = std::variant<std::vector<AgentBaseline>, std::vector<AgentSV>, std::vector<AgentSCS>>;

struct SystemState {
    AgentList agents;
    double t{0.0};

    ModelId model() const { return static_cast<ModelId>(agents.index()); }
    std::size_t size() const;

    std::vector<Vec2> positions() const;
    std::vector<double> phases() const;
    /// Heading angles (Vicsek) or velocity polar angles (Cucker-Smale); empty for baseline.
    std::vector<double> orientations() const;
};

/// Maps any finite angle to (-pi, pi]. Throws std::domain_error on non-finite input.
double wrap_angle(double a);

/// Spatial kernel (A + J cos s)/dist - B/dist^2. Throws std::domain_error when dist <= 0.
double phi_E(double dist, double s, const ModelParams& p);

/// Full phase-coupling summand K sin(s)/dist. Throws std::domain_error when dist <= 0.
double phi_xi_summand(double dist, double s, double K);

/// Heading-coupling summand; the kernel is identically 1, so this is the wrapped difference.
inline double phi_theta_summand(double z) { return wrap_angle(z); }

/// Cucker-Smale communication rate H / (1 + dist^2)^beta.
double phi_v(double dist, const ModelParams& p);

}  // namespace swarm
