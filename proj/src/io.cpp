#include "swarmalator/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "swarmalator/config.hpp"
#include "swarmalator/version.hpp"

namespace swarm {

using nlohmann::json;

std::string_view artifact_version() { return SWARMALATOR_VERSION; }

std::filesystem::path metadata_path(const std::filesystem::path& trajectory) {
    return std::filesystem::path(trajectory.string() + ".meta.json");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trajectory_header(ModelId model) {
    switch (model) {
        case ModelId::baseline: return "t,agent_id,x,y,xi";
        case ModelId::vicsek: return "t,agent_id,x,y,theta,xi";
        case ModelId::cucker_smale: return "t,agent_id,x,y,vx,vy,xi";
    }
    return {};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj, const json& extra) {
    if (traj.samples.empty()) throw std::invalid_argument("write_trajectory: empty trajectory");
    std::string text = trajectory_header(traj.model) + "\n";
    for (const SystemState& s : traj.samples) {
        const std::string t = format_double(s.t);
        std::visit(
            [&](const auto& list) {
                using Agent = typename std::decay_t<decltype(list)>::value_type;
                for (std::size_t i = 0; i < list.size(); ++i) {
                    const Agent& a = list[i];
                    text += t;
                    text += ',' + std::to_string(i) + ',' + format_double(a.x.x) + ',' + format_double(a.x.y);
                    if constexpr (std::is_same_v<Agent, AgentSV>) text += ',' + format_double(a.theta);
                    if constexpr (std::is_same_v<Agent, AgentSCS>) {
                        text += ',' + format_double(a.v.x) + ',' + format_double(a.v.y);
                    }
                    text += ',' + format_double(a.xi) + '\n';
                }
            },
            s.agents);
    }
    write_text_file(path, text);

    json meta = extra;
    meta["format_version"] = 1;
    meta["artifact_version"] = std::string(artifact_version());
    meta["model"] = std::string(to_string(traj.model));
    meta["N"] = traj.samples.front().size();
    meta["seed"] = traj.seed;
    meta["params"] = to_json(traj.params);
    meta["integrator"] = to_json(traj.integrator);
    meta["solver_stats"] = to_json(traj.stats);
    meta["samples"] = traj.samples.size();
    write_text_file(metadata_path(path), meta.dump(2) + "\n");
}

namespace {

double parse_number(const std::string& field, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') {
        throw std::runtime_error("trajectory line " + std::to_string(line) + ": bad number '" + field + "'");
    }
    return v;
}

}  // namespace

Trajectory read_trajectory(const std::filesystem::path& path) {
    const json meta = read_json_file(metadata_path(path));
    Trajectory traj;
    traj.model = parse_model_id(meta.at("model").get<std::string>());
    traj.seed = meta.at("seed").get<std::uint64_t>();
    traj.params = params_from_json(meta.at("params"));
    traj.integrator = integrator_from_json(meta.at("integrator"));
    if (meta.contains("solver_stats")) {
        const auto& st = meta.at("solver_stats");
        traj.stats = {st.at("accepted").get<std::uint64_t>(), st.at("rejected").get<std::uint64_t>(),
                      st.at("rhs_evals").get<std::uint64_t>(), st.at("forced").get<std::uint64_t>()};
    }
    const std::size_t n = meta.at("N").get<std::size_t>();

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    std::getline(in, line);
    if (line != trajectory_header(traj.model)) {
        throw std::runtime_error("trajectory header does not match model " + std::string(to_string(traj.model)));
    }
    const std::size_t width = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    std::vector<double> flat;
    std::vector<std::string> fields;
    std::size_t line_no = 1;
    double current_t = 0.0;
    std::size_t expected_agent = 0;
    auto flush = [&] {
        if (flat.empty()) return;
        traj.samples.push_back(unpack_state(traj.model, flat, current_t));
        flat.clear();
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        fields.clear();
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != width) {
            throw std::runtime_error("trajectory line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(width) + " columns");
        }
        const double t = parse_number(fields[0], line_no);
        const auto agent = static_cast<std::size_t>(parse_number(fields[1], line_no));
        if (agent == 0) {
            flush();
            current_t = t;
            expected_agent = 0;
        }
        if (agent != expected_agent || t != current_t) {
            throw std::runtime_error("trajectory line " + std::to_string(line_no) + ": rows out of order");
        }
        ++expected_agent;
        for (std::size_t c = 2; c < width; ++c) flat.push_back(parse_number(fields[c], line_no));
    }
    flush();
    for (const auto& s : traj.samples) {
        if (s.size() != n) throw std::runtime_error("trajectory sample has wrong agent count");
    }
    return traj;
}

}  // namespace swarm
