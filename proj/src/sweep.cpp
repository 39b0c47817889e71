#include "swarmalator/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "swarmalator/init.hpp"
#include "swarmalator/io.hpp"
#include "swarmalator/run.hpp"

namespace swarm {

using nlohmann::json;

std::string_view to_string(SeedMode m) { return m == SeedMode::per_run ? "per_run" : "per_replicate"; }

SeedMode parse_seed_mode(std::string_view name) {
    if (name == "per_run") return SeedMode::per_run;
    if (name == "per_replicate") return SeedMode::per_replicate;
    throw std::invalid_argument("unknown seed mode '" + std::string(name) + "' (expected per_run or per_replicate)");
}

void SweepSpec::validate() const {
    if (replicates < 1) throw ConfigError("replicates", "must be >= 1");
    if (workers < 1) throw ConfigError("workers", "must be >= 1");
    base.validate();
    for (const SweepPoint& pt : grid_points(*this)) {
        SimConfig c = base;
        c.params.r = pt.r;
        c.params.J = pt.J;
        c.params.K = pt.K;
        try {
            c.params.validate(c.model, c.n);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("grid", e.what());
        }
    }
}

std::vector<SweepPoint> grid_points(const SweepSpec& spec) {
    const auto& p = spec.base.params;
    const std::vector<double> rs = spec.r.empty() ? std::vector<double>{p.r} : spec.r;
    const std::vector<double> js = spec.J.empty() ? std::vector<double>{p.J} : spec.J;
    const std::vector<double> ks = spec.K.empty() ? std::vector<double>{p.K} : spec.K;
    std::vector<SweepPoint> out;
    out.reserve(rs.size() * js.size() * ks.size());
    for (double r : rs) {
        for (double J : js) {
            for (double K : ks) out.push_back({r, J, K});
        }
    }
    return out;
}

std::vector<double> linear_range(double from, double to, double step) {
    if (!(step > 0.0) || !std::isfinite(from) || !std::isfinite(to) || to < from) {
        throw std::invalid_argument("range needs finite from <= to and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = std::round((from + static_cast<double>(k) * step) * 1e12) / 1e12;
    }
    return out;
}

std::uint64_t row_seed(const SweepSpec& spec, std::size_t index, std::size_t replicate) {
    return derive_seed(spec.base.seed, spec.seed_mode == SeedMode::per_run ? index : replicate);
}

SimConfig run_config(const SweepSpec& spec, const SweepPoint& point, std::uint64_t seed) {
    SimConfig c = spec.base;
    c.params.r = point.r;
    c.params.J = point.J;
    c.params.K = point.K;
    c.seed = seed;
    return c;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const std::filesystem::path& out_dir,
                                const std::function<void(const SweepRow&)>& on_done) {
    spec.validate();
    const auto points = grid_points(spec);
    std::vector<SweepRow> rows(points.size() * spec.replicates);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        rows[k].index = k;
        rows[k].point = points[k / spec.replicates];
        rows[k].replicate = k % spec.replicates;
        rows[k].seed = row_seed(spec, k, rows[k].replicate);
    }

    std::atomic<std::size_t> next{0};
    std::mutex report;
    auto worker = [&] {
        for (std::size_t k = next++; k < rows.size(); k = next++) {
            SweepRow& row = rows[k];
            try {
                const SimConfig cfg = run_config(spec, row.point, row.seed);
                const RunResult result = run_simulation(cfg);
                row.summary = result.summary;
                row.stats = result.trajectory.stats;
                if (spec.keep_runs && !out_dir.empty()) {
                    write_run_outputs(cfg, result, out_dir / "runs" / std::to_string(k));
                }
                row.ok = true;
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
            }
            if (on_done) {
                std::lock_guard lock(report);
                on_done(row);
            }
        }
    };
    const std::size_t n_threads = std::min(spec.workers, rows.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    }
    return rows;
}

namespace {

// Errors go into a quoted CSV field.
std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out + '"';
}

}  // namespace

std::string sweep_table(const std::vector<SweepRow>& rows) {
    std::string out =
        "index,r,J,K,replicate,seed,status,R_phase,R_heading,S_plus,S_minus,n_clusters,mean_speed,local_R,"
        "diameter,label,accepted,rejected,rhs_evals,error\n";
    for (const SweepRow& row : rows) {
        const auto& s = row.summary;
        out += std::to_string(row.index) + ',' + format_double(row.point.r) + ',' + format_double(row.point.J) +
               ',' + format_double(row.point.K) + ',' + std::to_string(row.replicate) + ',' +
               std::to_string(row.seed) + ',' + (row.ok ? "ok" : "failed") + ',';
        if (row.ok) {
            out += format_double(s.R_phase) + ',' + format_double(s.R_heading) + ',' + format_double(s.S_plus) +
                   ',' + format_double(s.S_minus) + ',' + std::to_string(s.n_clusters) + ',' +
                   format_double(s.mean_speed) + ',' + format_double(s.local_R) + ',' +
                   format_double(s.diameter) + ',' + std::string(to_string(s.label)) + ',';
        } else {
            out += ",,,,,,,,,";
        }
        out += std::to_string(row.stats.accepted) + ',' + std::to_string(row.stats.rejected) + ',' +
               std::to_string(row.stats.rhs_evals) + ',' + (row.ok ? std::string() : quoted(row.error)) + '\n';
    }
    return out;
}

namespace {

std::vector<double> axis_from_json(const json& v, const std::string& field) {
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(field, "expected numbers");
            out.push_back(e.get<double>());
        }
        if (out.empty()) throw ConfigError(field, "empty list");
        return out;
    }
    if (v.is_object()) {
        for (const auto& [key, value] : v.items()) {
            if (key != "from" && key != "to" && key != "step") throw ConfigError(field + "." + key, "unknown key");
            if (!value.is_number()) throw ConfigError(field + "." + key, "expected a number");
        }
        for (const char* key : {"from", "to", "step"}) {
            if (!v.contains(key)) throw ConfigError(field + "." + key, "missing required field");
        }
        try {
            return linear_range(v.at("from").get<double>(), v.at("to").get<double>(), v.at("step").get<double>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(field, e.what());
        }
    }
    throw ConfigError(field, "expected a number, a list, or {from, to, step}");
}

}  // namespace

SweepSpec parse_sweep_spec(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (key != "base" && key != "grid" && key != "replicates" && key != "seed_mode" && key != "workers" &&
            key != "keep_runs") {
            throw ConfigError(key, "unknown key");
        }
    }
    if (!j.contains("base")) throw ConfigError("base", "missing required field");
    if (!j.contains("grid")) throw ConfigError("grid", "missing required field");
    SweepSpec spec;
    try {
        spec.base = parse_sim_config(j.at("base"));
    } catch (const ConfigError& e) {
        throw ConfigError("base." + e.field(), std::string(e.what()).substr(e.field().size() + 2));
    }
    const json& grid = j.at("grid");
    if (!grid.is_object()) throw ConfigError("grid", "expected an object");
    for (const auto& [key, value] : grid.items()) {
        if (key == "r") {
            spec.r = axis_from_json(value, "grid.r");
        } else if (key == "J") {
            spec.J = axis_from_json(value, "grid.J");
        } else if (key == "K") {
            spec.K = axis_from_json(value, "grid.K");
        } else {
            throw ConfigError("grid." + key, "unknown key (expected r, J, K)");
        }
    }
    if (j.contains("replicates")) {
        const json& v = j.at("replicates");
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
            throw ConfigError("replicates", "expected a positive integer");
        }
        spec.replicates = v.get<std::size_t>();
    }
    if (j.contains("seed_mode")) {
        const json& v = j.at("seed_mode");
        if (!v.is_string()) throw ConfigError("seed_mode", "expected a string");
        try {
            spec.seed_mode = parse_seed_mode(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError("seed_mode", e.what());
        }
    }
    if (j.contains("workers")) {
        const json& v = j.at("workers");
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
            throw ConfigError("workers", "expected a positive integer");
        }
        spec.workers = v.get<std::size_t>();
    }
    if (j.contains("keep_runs")) {
        const json& v = j.at("keep_runs");
        if (!v.is_boolean()) throw ConfigError("keep_runs", "expected true or false");
        spec.keep_runs = v.get<bool>();
    }
    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) { return parse_sweep_spec(read_json_file(path)); }

}  // namespace swarm
