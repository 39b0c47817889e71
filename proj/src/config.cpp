#include "swarmalator/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace swarm {

using nlohmann::json;

std::string_view to_string(PlotMode m) { return m == PlotMode::spatial ? "spatial" : "psi-xi"; }

PlotMode parse_plot_mode(std::string_view name) {
    if (name == "spatial") return PlotMode::spatial;
    if (name == "psi-xi") return PlotMode::psi_xi;
    throw std::invalid_argument("unknown plot mode '" + std::string(name) + "' (expected spatial or psi-xi)");
}

namespace {

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

// Reads one JSON object and rejects keys that were never asked for.
class Section {
public:
    Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_.empty() ? "<root>" : where_, "expected an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& raw(const std::string& key) {
        if (!has(key)) throw ConfigError(join(where_, key), "missing required field");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(join(where_, key), "expected a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::uint64_t unsigned_integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
            throw ConfigError(join(where_, key), "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(join(where_, key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(join(where_, key), "expected a string");
        return v.get<std::string>();
    }

    std::string path(const std::string& key) const { return join(where_, key); }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.contains(key)) throw ConfigError(join(where_, key), "unknown key");
        }
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

template <typename F>
auto rethrow_as_config(const std::string& field, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
    }
}

}  // namespace

ModelParams params_from_json(const json& j, const std::string& where) {
    Section s(j, where);
    ModelParams p;
    p.A = s.number_or("A", p.A);
    p.B = s.number_or("B", p.B);
    p.J = s.number_or("J", p.J);
    p.K = s.number_or("K", p.K);
    p.r = s.number_or("r", p.r);
    p.v0 = s.number_or("v0", p.v0);
    if (s.has("omega")) {
        const json& w = s.raw("omega");
        if (w.is_number()) {
            p.omega = w.get<double>();
        } else if (w.is_array()) {
            for (const auto& e : w) {
                if (!e.is_number()) throw ConfigError(s.path("omega"), "expected numbers");
                p.omega_per_agent.push_back(e.get<double>());
            }
        } else {
            throw ConfigError(s.path("omega"), "expected a number or a list of numbers");
        }
    }
    p.cs_H = s.number_or("cs_H", p.cs_H);
    p.cs_beta = s.number_or("cs_beta", p.cs_beta);
    p.include_self = s.boolean_or("include_self", p.include_self);
    s.finish();
    return p;
}

IntegratorConfig integrator_from_json(const json& j, const std::string& where) {
    Section s(j, where);
    IntegratorConfig c;
    if (s.has("method")) {
        const std::string m = s.string("method");
        c.method = rethrow_as_config(s.path("method"), [&] { return parse_method(m); });
    }
    c.dt = s.number_or("dt", c.dt);
    c.rel_tol = s.number_or("rel_tol", c.rel_tol);
    c.abs_tol = s.number_or("abs_tol", c.abs_tol);
    c.t_end = s.number("t_end");
    c.sample_every = s.number_or("sample_every", c.sample_every);
    c.min_step = s.number_or("min_step", c.min_step);
    c.freeze_neighbors = s.boolean_or("freeze_neighbors", c.freeze_neighbors);
    s.finish();
    return c;
}

void SimConfig::validate() const {
    if (n < 1) throw ConfigError("N", "must be >= 1");
    if (model != ModelId::vicsek && n < 2) throw ConfigError("N", "must be >= 2 for this model");
    auto field_of = [](const std::invalid_argument& e) {
        const std::string what = e.what();
        return what.substr(0, what.find(':'));
    };
    try {
        params.validate(model, n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field_of(e), std::string(e.what()).substr(field_of(e).size() + 2));
    }
    try {
        integrator.validate();
        init.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field_of(e), std::string(e.what()).substr(field_of(e).size() + 2));
    }
    if (classify_window && !(*classify_window > 0.0)) throw ConfigError("classifier.window", "must be > 0");
    if (2.0 * window() > integrator.t_end * (1.0 + 1e-12)) {
        throw ConfigError("classifier.window", "must be at most half of integrator.t_end");
    }
    if (!(classifier.box_length > 0.0)) throw ConfigError("init.box_length", "must be > 0");
    const auto& k = classifier;
    for (auto [name, value] : {std::pair{"static_factor", k.static_factor}, {"eps_x_fraction", k.eps_x_fraction},
                               {"eps_xi", k.eps_xi}}) {
        if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(std::string("classifier.") + name, "must be > 0");
    }
    if (!(k.min_cluster_fraction >= 0.0 && k.min_cluster_fraction <= 1.0)) {
        throw ConfigError("classifier.min_cluster_fraction", "must lie in [0, 1]");
    }
}

SimConfig parse_sim_config(const json& j) {
    Section root(j, "");
    SimConfig c;
    // Required keys first, so a missing one is reported by name.
    for (const char* key : {"model", "N", "seed", "params", "integrator"}) {
        if (!root.has(key)) throw ConfigError(key, "missing required field");
    }
    const std::string model = root.string("model");
    c.model = rethrow_as_config("model", [&] { return parse_model_id(model); });
    c.n = static_cast<std::size_t>(root.unsigned_integer("N"));
    c.seed = root.unsigned_integer("seed");
    c.params = params_from_json(root.raw("params"), "params");
    c.integrator = integrator_from_json(root.raw("integrator"), "integrator");

    if (root.has("init")) {
        Section s(root.raw("init"), "init");
        c.init.box_length = s.number_or("box_length", c.init.box_length);
        c.init.velocity_half_width = s.number_or("velocity_half_width", c.init.velocity_half_width);
        s.finish();
    }
    c.classifier.box_length = c.init.box_length;
    if (root.has("classifier")) {
        Section s(root.raw("classifier"), "classifier");
        if (s.has("window")) c.classify_window = s.number("window");
        auto& k = c.classifier;
        k.static_factor = s.number_or("static_factor", k.static_factor);
        k.tau_R = s.number_or("tau_R", k.tau_R);
        k.tau_S = s.number_or("tau_S", k.tau_S);
        k.tau_async = s.number_or("tau_async", k.tau_async);
        k.tau_local = s.number_or("tau_local", k.tau_local);
        k.tau_clusters = s.number_or("tau_clusters", k.tau_clusters);
        k.min_cluster_fraction = s.number_or("min_cluster_fraction", k.min_cluster_fraction);
        k.eps_x_fraction = s.number_or("eps_x_fraction", k.eps_x_fraction);
        k.eps_xi = s.number_or("eps_xi", k.eps_xi);
        s.finish();
    }
    if (root.has("outputs")) {
        const json& outs = root.raw("outputs");
        if (!outs.is_array()) throw ConfigError("outputs", "expected a list");
        c.write_trajectory = c.write_summary = c.write_plots = false;
        for (const auto& o : outs) {
            const std::string name = o.is_string() ? o.get<std::string>() : std::string();
            if (name == "trajectory") {
                c.write_trajectory = true;
            } else if (name == "summary") {
                c.write_summary = true;
            } else if (name == "plots") {
                c.write_plots = true;
            } else {
                throw ConfigError("outputs", "unknown output '" + o.dump() + "' (expected trajectory, summary, plots)");
            }
        }
    }
    if (root.has("plots")) {
        const json& plots = root.raw("plots");
        if (!plots.is_array()) throw ConfigError("plots", "expected a list");
        for (std::size_t i = 0; i < plots.size(); ++i) {
            Section s(plots[i], "plots[" + std::to_string(i) + "]");
            PlotRequest req;
            const std::string mode = s.string("mode");
            req.mode = rethrow_as_config(s.path("mode"), [&] { return parse_plot_mode(mode); });
            if (s.has("at")) req.at = s.number("at");
            s.finish();
            c.plots.push_back(req);
        }
    }
    if (c.write_plots && c.plots.empty()) {
        c.plots = {{PlotMode::spatial, std::nullopt}, {PlotMode::psi_xi, std::nullopt}};
    }
    root.finish();
    c.validate();
    return c;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("malformed JSON in '") + path.string() + "': " + e.what());
    }
}

SimConfig load_sim_config(const std::filesystem::path& path) { return parse_sim_config(read_json_file(path)); }

json to_json(const ModelParams& p) {
    json j{{"A", p.A}, {"B", p.B}, {"J", p.J}, {"K", p.K}, {"r", p.r}, {"v0", p.v0},
           {"cs_H", p.cs_H}, {"cs_beta", p.cs_beta}, {"include_self", p.include_self}};
    if (p.omega_per_agent.empty()) {
        j["omega"] = p.omega;
    } else {
        j["omega"] = p.omega_per_agent;
    }
    return j;
}

json to_json(const IntegratorConfig& c) {
    return {{"method", std::string(to_string(c.method))},
            {"dt", c.dt},
            {"rel_tol", c.rel_tol},
            {"abs_tol", c.abs_tol},
            {"t_end", c.t_end},
            {"sample_every", c.sample_every},
            {"min_step", c.min_step},
            {"freeze_neighbors", c.freeze_neighbors}};
}

json to_json(const SolverStats& s) {
    return {{"accepted", s.accepted}, {"rejected", s.rejected}, {"rhs_evals", s.rhs_evals}, {"forced", s.forced}};
}

json to_json(const ObservableSummary& s) {
    return {{"t", s.t},
            {"R_phase", s.R_phase},
            {"R_heading", s.R_heading},
            {"S_plus", s.S_plus},
            {"S_minus", s.S_minus},
            {"n_clusters", s.n_clusters},
            {"mean_speed", s.mean_speed},
            {"local_R", s.local_R},
            {"diameter", s.diameter},
            {"label", std::string(to_string(s.label))}};
}

json to_json(const SimConfig& c) {
    json j{{"model", std::string(to_string(c.model))},
           {"N", c.n},
           {"seed", c.seed},
           {"params", to_json(c.params)},
           {"init", {{"box_length", c.init.box_length}, {"velocity_half_width", c.init.velocity_half_width}}},
           {"integrator", to_json(c.integrator)}};
    const auto& k = c.classifier;
    j["classifier"] = {{"window", c.window()},           {"static_factor", k.static_factor},
                       {"tau_R", k.tau_R},               {"tau_S", k.tau_S},
                       {"tau_async", k.tau_async},       {"tau_local", k.tau_local},
                       {"tau_clusters", k.tau_clusters}, {"eps_x_fraction", k.eps_x_fraction},
                       {"eps_xi", k.eps_xi},             {"min_cluster_fraction", k.min_cluster_fraction}};
    json outs = json::array();
    if (c.write_trajectory) outs.push_back("trajectory");
    if (c.write_summary) outs.push_back("summary");
    if (c.write_plots) outs.push_back("plots");
    j["outputs"] = outs;
    json plots = json::array();
    for (const auto& p : c.plots) {
        json e{{"mode", std::string(to_string(p.mode))}};
        if (p.at) e["at"] = *p.at;
        plots.push_back(e);
    }
    j["plots"] = plots;
    return j;
}

}  // namespace swarm
