#include "swarmalator/model.hpp"

#include <stdexcept>
#include <string>

namespace swarm {

std::string_view to_string(ModelId id) {
    switch (id) {
        case ModelId::baseline: return "baseline-swarmalator";
        case ModelId::vicsek: return "swarmalator-vicsek";
        case ModelId::cucker_smale: return "swarmalator-cucker-smale";
    }
    return "unknown";
}

ModelId parse_model_id(std::string_view name) {
    if (name == "baseline-swarmalator") return ModelId::baseline;
    if (name == "swarmalator-vicsek") return ModelId::vicsek;
    if (name == "swarmalator-cucker-smale") return ModelId::cucker_smale;
    throw std::invalid_argument("unknown model id '" + std::string(name) + "'");
}

void ModelParams::validate(ModelId model, std::size_t n_agents) const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("params." + field + ": " + why);
    };
    for (auto [name, value] : {std::pair{"A", A}, {"B", B}, {"J", J}, {"K", K}, {"r", r}, {"v0", v0},
                               {"omega", omega}, {"cs_H", cs_H}, {"cs_beta", cs_beta}}) {
        if (!std::isfinite(value)) fail(name, "must be finite");
    }
    if (!(A > 0.0)) fail("A", "must be > 0");
    if (!(B > 0.0)) fail("B", "must be > 0");
    if (J < -1.0 || J > 1.0) fail("J", "must lie in [-1, 1]");
    if (model == ModelId::vicsek && !(r > 0.0)) fail("r", "must be > 0 for the Vicsek model");
    if (cs_H < 0.0) fail("cs_H", "must be >= 0");
    if (cs_beta < 0.0) fail("cs_beta", "must be >= 0");
    if (!omega_per_agent.empty()) {
        if (omega_per_agent.size() != n_agents) fail("omega", "per-agent list length must equal N");
        for (double w : omega_per_agent) {
            if (!std::isfinite(w)) fail("omega", "must be finite");
        }
    }
}

std::size_t SystemState::size() const {
    return std::visit([](const auto& list) { return list.size(); }, agents);
}

std::vector<Vec2> SystemState::positions() const {
    return std::visit(
        [](const auto& list) {
            std::vector<Vec2> out;
            out.reserve(list.size());
            for (const auto& a : list) out.push_back(a.x);
            return out;
        },
        agents);
}

std::vector<double> SystemState::phases() const {
    return std::visit(
        [](const auto& list) {
            std::vector<double> out;
            out.reserve(list.size());
            for (const auto& a : list) out.push_back(a.xi);
            return out;
        },
        agents);
}

std::vector<double> SystemState::orientations() const {
    std::vector<double> out;
    if (const auto* sv = std::get_if<std::vector<AgentSV>>(&agents)) {
        for (const auto& a : *sv) out.push_back(a.theta);
    } else if (const auto* scs = std::get_if<std::vector<AgentSCS>>(&agents)) {
        for (const auto& a : *scs) out.push_back(a.v.angle());
    }
    return out;
}

double wrap_angle(double a) {
    if (!std::isfinite(a)) throw std::domain_error("wrap_angle: non-finite angle");
    if (a > -kPi && a <= kPi) return a;
    double w = std::remainder(a, kTwoPi);
    if (w <= -kPi) w += kTwoPi;
    return w;
}

double phi_E(double dist, double s, const ModelParams& p) {
    if (!(dist > 0.0)) throw std::domain_error("phi_E: distance must be > 0 (coincident agents)");
    return (p.A + p.J * std::cos(s)) / dist - p.B / (dist * dist);
}

double phi_xi_summand(double dist, double s, double K) {
    if (!(dist > 0.0)) throw std::domain_error("phi_xi_summand: distance must be > 0 (coincident agents)");
    return K * std::sin(s) / dist;
}

double phi_v(double dist, const ModelParams& p) {
    return p.cs_H / std::pow(1.0 + dist * dist, p.cs_beta);
}

}  // namespace swarm
