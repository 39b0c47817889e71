#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <regex>

#include "swarmalator/config.hpp"
#include "swarmalator/init.hpp"
#include "swarmalator/io.hpp"
#include "swarmalator/plot.hpp"
#include "swarmalator/run.hpp"
#include "swarmalator/sweep.hpp"

using namespace swarm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "swarmalator-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json minimal_config() {
    return json::parse(R"({
        "model": "swarmalator-vicsek",
        "N": 20,
        "seed": 5,
        "params": {"J": 0.1, "K": 1, "r": 0.5},
        "integrator": {"t_end": 2, "sample_every": 0.5, "rel_tol": 1e-3, "abs_tol": 1e-6}
    })");
}

std::string config_error_field(const json& j) {
    try {
        parse_sim_config(j);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("config parsing fills defaults") {
    const SimConfig c = parse_sim_config(minimal_config());
    CHECK(c.model == ModelId::vicsek);
    CHECK(c.n == 20);
    CHECK(c.seed == 5);
    CHECK(c.params.r == 0.5);
    CHECK(c.params.A == 1.0);
    CHECK(c.params.v0 == 0.003);
    CHECK(c.integrator.method == Method::rk45);
    CHECK(c.integrator.rel_tol == 1e-3);
    CHECK(c.integrator.min_step == 1e-9);
    CHECK(c.window() == doctest::Approx(0.2));
    CHECK(c.write_trajectory);
    CHECK(c.write_summary);
    CHECK_FALSE(c.write_plots);
}

TEST_CASE("config errors name the offending field") {
    for (const char* key : {"seed", "N", "model", "params", "integrator"}) {
        json j = minimal_config();
        j.erase(key);
        CHECK(config_error_field(j) == key);
    }
    json j = minimal_config();
    j["integrator"].erase("t_end");
    CHECK(config_error_field(j) == "integrator.t_end");
    j = minimal_config();
    j["params"]["Q"] = 1;
    CHECK(config_error_field(j) == "params.Q");
    j = minimal_config();
    j["extra"] = 1;
    CHECK(config_error_field(j) == "extra");
    j = minimal_config();
    j["params"]["J"] = 2;
    CHECK(config_error_field(j) == "params.J");
    j = minimal_config();
    j["params"]["r"] = "wide";
    CHECK(config_error_field(j) == "params.r");
    j = minimal_config();
    j["model"] = "vicsek";
    CHECK(config_error_field(j) == "model");
    j = minimal_config();
    j["N"] = -3;
    CHECK(config_error_field(j) == "N");
    j = minimal_config();
    j["integrator"]["method"] = "euler";
    CHECK(config_error_field(j) == "integrator.method");
    j = minimal_config();
    j["classifier"] = {{"window", 5}};
    CHECK(config_error_field(j) == "classifier.window");
    j = minimal_config();
    j["outputs"] = {"movie"};
    CHECK(config_error_field(j) == "outputs");
    j = minimal_config();
    j["plots"] = {{{"mode", "polar"}}};
    CHECK(config_error_field(j) == "plots[0].mode");
}

TEST_CASE("config survives a round trip through JSON") {
    json j = minimal_config();
    j["params"]["omega"] = json::array();
    for (int i = 0; i < 20; ++i) j["params"]["omega"].push_back(0.01 * i);
    j["outputs"] = {"summary", "plots"};
    j["plots"] = {{{"mode", "psi-xi"}, {"at", 1.0}}};
    const SimConfig a = parse_sim_config(j);
    const SimConfig b = parse_sim_config(to_json(a));
    CHECK(to_json(a) == to_json(b));
    CHECK(b.params.omega_per_agent.size() == 20);
    CHECK(b.plots.size() == 1);
    CHECK(*b.plots[0].at == 1.0);
    CHECK_FALSE(b.write_trajectory);
}

TEST_CASE("trajectory export: row count, header, exact round trip, sidecar") {
    const fs::path dir = scratch("export");
    Trajectory traj;
    traj.model = ModelId::cucker_smale;
    traj.seed = 77;
    SystemState s = init_random(ModelId::cucker_smale, {}, 3, 77);
    traj.samples.push_back(s);
    s.t = 0.1;
    std::get<std::vector<AgentSCS>>(s.agents)[1].x.x = 1.0 / 3.0;
    traj.samples.push_back(s);
    write_trajectory(dir / "t.csv", traj);

    const std::string text = read_text_file(dir / "t.csv");
    CHECK(count(text, "\n") == 7);
    CHECK(text.starts_with("t,agent_id,x,y,vx,vy,xi\n"));

    const Trajectory back = read_trajectory(dir / "t.csv");
    REQUIRE(back.samples.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(back.samples[k].t == traj.samples[k].t);
        CHECK(pack_state(back.samples[k]) == pack_state(traj.samples[k]));
    }
    CHECK(back.seed == 77);
    const json meta = read_json_file(metadata_path(dir / "t.csv"));
    CHECK(meta.at("seed") == 77);
    CHECK(meta.at("artifact_version") == std::string(artifact_version()));
    CHECK(meta.at("model") == "swarmalator-cucker-smale");

    CHECK_THROWS(write_trajectory(dir / "missing" / "deeper" / "t.csv", traj));
    CHECK_THROWS_AS(write_trajectory(dir / "empty.csv", Trajectory{}), std::invalid_argument);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("scatter plots") {
    Trajectory traj;
    traj.model = ModelId::vicsek;
    traj.params.r = 1.4;
    const SystemState s = init_random(ModelId::vicsek, {}, 300, 4);
    traj.samples.push_back(s);
    const std::string svg = render_scatter(traj, PlotMode::spatial, 0.0);
    CHECK(count(svg, "<circle") == 300);
    CHECK(svg.find("r=1.4") != std::string::npos);
    CHECK(svg.find("N=300") != std::string::npos);

    CHECK(angle_color(0.0) == angle_color(0.0 + kTwoPi));
    CHECK(angle_color(1.0) != angle_color(2.0));

    // A ring with phase equal to its polar angle lands on the diagonal.
    std::vector<AgentSV> ring(24);
    for (std::size_t k = 0; k < ring.size(); ++k) {
        const double a = wrap_angle(kTwoPi * (static_cast<double>(k) + 0.5) / 24.0);
        ring[k] = {{2.0 + std::cos(a), -1.0 + std::sin(a)}, 0.0, a};
    }
    Trajectory rt;
    rt.model = ModelId::vicsek;
    rt.samples.push_back({ring, 0.0});
    rt.samples.push_back({ring, 1.0});
    const std::string psi = render_scatter(rt, PlotMode::psi_xi, 0.8);
    const std::regex attrs(R"re(data-u="([^"]+)" data-v="([^"]+)")re");
    std::size_t seen = 0;
    for (auto it = std::sregex_iterator(psi.begin(), psi.end(), attrs); it != std::sregex_iterator(); ++it) {
        const double u = std::stod((*it)[1]), v = std::stod((*it)[2]);
        CHECK(std::abs(wrap_angle(v - u)) < 1e-9);
        ++seen;
    }
    CHECK(seen == 24);
    CHECK(psi.find("is t=1") != std::string::npos);
    CHECK(nearest_sample(rt, 0.4) == 0);
    CHECK_THROWS_AS(render_scatter(Trajectory{}, PlotMode::spatial, 0.0), std::invalid_argument);
}

TEST_CASE("two plot agents with equal phases share a color") {
    Trajectory traj;
    traj.model = ModelId::baseline;
    traj.samples.push_back({std::vector<AgentBaseline>{{{0, 0}, 0.0}, {{1, 0}, 0.0}}, 0.0});
    const std::string svg = render_scatter(traj, PlotMode::spatial, 0.0);
    const std::regex fill(R"re(<circle[^>]*fill="([^"]+)")re");
    std::vector<std::string> colors;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), fill); it != std::sregex_iterator(); ++it) {
        colors.push_back((*it)[1]);
    }
    REQUIRE(colors.size() == 2);
    CHECK(colors[0] == colors[1]);
}

TEST_CASE("a lone Vicsek agent run writes a straight-line trajectory") {
    json j = minimal_config();
    j["N"] = 1;
    j["integrator"]["t_end"] = 4;
    j["integrator"]["sample_every"] = 1;
    j["classifier"] = {{"window", 1}};
    const SimConfig cfg = parse_sim_config(j);
    const RunResult r = run_simulation(cfg);
    const fs::path dir = scratch("lone");
    write_run_outputs(cfg, r, dir);
    const Trajectory back = read_trajectory(dir / "trajectory.csv");
    const auto& first = std::get<std::vector<AgentSV>>(back.samples.front().agents)[0];
    for (const auto& s : back.samples) {
        const auto& a = std::get<std::vector<AgentSV>>(s.agents)[0];
        CHECK(a.theta == first.theta);
        CHECK(a.x.x == doctest::Approx(first.x.x + 0.003 * s.t * std::cos(first.theta)).epsilon(1e-12));
        CHECK(a.x.y == doctest::Approx(first.x.y + 0.003 * s.t * std::sin(first.theta)).epsilon(1e-12));
    }
}

TEST_CASE("identical configs give byte-identical outputs") {
    json j = minimal_config();
    j["outputs"] = {"trajectory", "summary", "plots"};
    const SimConfig cfg = parse_sim_config(j);
    const fs::path a = scratch("det-a"), b = scratch("det-b");
    const auto files = write_run_outputs(cfg, run_simulation(cfg), a);
    write_run_outputs(cfg, run_simulation(cfg), b);
    CHECK(files.size() == 5);
    for (const auto& f : files) CHECK(read_text_file(f) == read_text_file(b / f.filename()));
}

TEST_CASE("sweep grid, seeds and rows") {
    SweepSpec spec;
    spec.base = parse_sim_config(minimal_config());
    spec.r = {0.2, 0.65, 1.4};
    CHECK(grid_points(spec).size() == 3);
    CHECK(linear_range(0.2, 1.4, 0.05).size() == 25);
    CHECK(linear_range(0.2, 1.4, 0.05)[3] == 0.35);
    CHECK(linear_range(0.2, 1.4, 0.05).back() == 1.4);

    spec.r = {0.5, 0.5};
    spec.replicates = 2;
    spec.workers = 3;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].point.r == rows[2].point.r);
    CHECK(rows[0].seed != rows[2].seed);
    CHECK(rows[0].seed != rows[1].seed);
    for (const auto& row : rows) CHECK(row.ok);
    const std::string table = sweep_table(rows);
    CHECK(count(table, "\n") == 5);

    spec.seed_mode = SeedMode::per_replicate;
    CHECK(row_seed(spec, 0, 0) == row_seed(spec, 2, 0));
    CHECK(row_seed(spec, 0, 0) != row_seed(spec, 1, 1));

    // Parallel and serial sweeps agree exactly.
    spec.workers = 1;
    const auto serial = run_sweep(spec);
    spec.workers = 4;
    const auto parallel = run_sweep(spec);
    CHECK(sweep_table(serial) == sweep_table(parallel));
}

TEST_CASE("a failing run is recorded in its row") {
    SweepSpec spec;
    json j = minimal_config();
    j["model"] = "swarmalator-cucker-smale";
    j["N"] = 4;
    j["integrator"]["min_step"] = 1e-3;
    j["integrator"]["method"] = "rk4";
    j["integrator"]["dt"] = 0.5;
    spec.base = parse_sim_config(j);
    // Huge coupling with coarse fixed steps overflows.
    spec.base.params.B = 1e300;
    spec.K = {1.0};
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].ok);
    CHECK_FALSE(rows[0].error.empty());
    CHECK(sweep_table(rows).find("failed") != std::string::npos);
}

TEST_CASE("sweep spec parsing") {
    json j;
    j["base"] = minimal_config();
    j["grid"] = {{"r", {{"from", 0.2}, {"to", 0.3}, {"step", 0.05}}}, {"K", {1, -1}}};
    j["replicates"] = 2;
    j["seed_mode"] = "per_replicate";
    const SweepSpec spec = parse_sweep_spec(j);
    CHECK(spec.r.size() == 3);
    CHECK(grid_points(spec).size() == 6);
    CHECK(spec.seed_mode == SeedMode::per_replicate);

    auto field = [](const json& k) {
        try {
            parse_sweep_spec(k);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string();
    };
    json bad = j;
    bad["grid"]["q"] = 1;
    CHECK(field(bad) == "grid.q");
    bad = j;
    bad["base"].erase("seed");
    CHECK(field(bad) == "base.seed");
    bad = j;
    bad["replicates"] = 0;
    CHECK(field(bad) == "replicates");
    bad = j;
    bad["grid"]["J"] = {3.0};
    CHECK(field(bad) == "grid");
}

TEST_CASE("shipped configs parse") {
    std::size_t seen = 0;
    for (const auto& entry : fs::directory_iterator(SWARMALATOR_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        ++seen;
        CAPTURE(entry.path().string());
        const json j = read_json_file(entry.path());
        if (j.contains("grid")) {
            const SweepSpec spec = load_sweep_spec(entry.path());
            CHECK(!grid_points(spec).empty());
        } else {
            CHECK_NOTHROW(load_sim_config(entry.path()).validate());
        }
    }
    CHECK(seen >= 3);
}
