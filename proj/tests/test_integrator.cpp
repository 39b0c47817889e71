#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "support.hpp"
#include "swarmalator/init.hpp"
#include "swarmalator/integrator.hpp"

using namespace swarm;

namespace {

FunctionSystem linear(double rate) {
    return FunctionSystem(1, [rate](double, std::span<const double> y, std::span<double> dy) { dy[0] = rate * y[0]; });
}

double taylor4(double z) { return 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0; }

double rk4_error(double dt) {
    auto sys = linear(-1.0);
    IntegratorConfig cfg;
    cfg.method = Method::rk4;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    cfg.sample_every = 1.0;
    double last = 0.0;
    integrate_ode(sys, {1.0}, cfg, [&](double, std::span<const double> y) { last = y[0]; });
    return std::abs(last - std::exp(-1.0));
}

}  // namespace

TEST_CASE("one RK4 step on a linear equation is the quartic Taylor polynomial") {
    auto grow = linear(1.0);
    CHECK(step_rk4(grow, std::vector<double>{1.0}, 0.0, 0.1)[0] == doctest::Approx(taylor4(0.1)).epsilon(1e-15));
    auto decay = linear(-1.0);
    CHECK(step_rk4(decay, std::vector<double>{1.0}, 0.0, 0.1)[0] == doctest::Approx(taylor4(-0.1)).epsilon(1e-15));
    CHECK(taylor4(0.1) == doctest::Approx(1.1051708333).epsilon(1e-10));
    CHECK(taylor4(-0.1) == doctest::Approx(0.9048375).epsilon(1e-10));
    auto still = linear(0.0);
    CHECK(step_rk4(still, std::vector<double>{3.5, }, 0.0, 7.0)[0] == 3.5);
}

TEST_CASE("RK4 rejects non-finite derivatives") {
    FunctionSystem bad(1, [](double, std::span<const double>, std::span<double> dy) {
        dy[0] = std::numeric_limits<double>::quiet_NaN();
    });
    CHECK_THROWS_AS(step_rk4(bad, std::vector<double>{1.0}, 0.0, 0.1), SolverError);
}

TEST_CASE("RK4 converges at fourth order") {
    for (double dt : {0.1, 0.05, 0.025}) {
        const double ratio = rk4_error(dt) / rk4_error(dt / 2);
        CHECK(ratio >= 13.0);
        CHECK(ratio <= 19.0);
    }
}

TEST_CASE("RK45 error shrinks with the tolerance") {
    // Nonlinear pendulum-like system with a known smooth solution computed by fine RK4.
    auto make = [] {
        return FunctionSystem(2, [](double, std::span<const double> y, std::span<double> dy) {
            dy[0] = y[1];
            dy[1] = -std::sin(y[0]);
        });
    };
    auto run = [&](Method m, double rel, double dt) {
        auto sys = make();
        IntegratorConfig cfg;
        cfg.method = m;
        cfg.rel_tol = rel;
        cfg.abs_tol = rel * 1e-3;
        cfg.dt = dt;
        cfg.t_end = 10.0;
        cfg.sample_every = 0.5;
        std::vector<double> out;
        integrate_ode(sys, {2.0, 0.0}, cfg, [&](double, std::span<const double> y) { out.push_back(y[0]); });
        return out;
    };
    const auto ref = run(Method::rk4, 1e-6, 1e-4);
    auto err = [&](double rel) {
        const auto got = run(Method::rk45, rel, 0.01);
        double e = 0;
        for (std::size_t k = 0; k < ref.size(); ++k) e = std::max(e, std::abs(got[k] - ref[k]));
        return e;
    };
    for (double rel : {1e-3, 1e-4, 1e-5, 1e-6}) {
        CHECK(err(rel * 1e-2) * 10.0 <= err(rel));
    }
}

TEST_CASE("sample times are exact and end at t_end") {
    const auto t = sample_times(1.0, 0.25);
    CHECK(t == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto u = sample_times(1.0, 0.3);
    CHECK(u == std::vector<double>{0.0, 0.3, 0.6, 0.3 * 3, 1.0});
    CHECK(sample_times(50.0, 1.0).size() == 51);

    auto sys = linear(-0.5);
    IntegratorConfig cfg;
    cfg.t_end = 2.0;
    cfg.sample_every = 0.3;
    std::vector<double> seen;
    integrate_ode(sys, {1.0}, cfg, [&](double s, std::span<const double>) { seen.push_back(s); });
    CHECK(seen == sample_times(2.0, 0.3));
}

TEST_CASE("config validation") {
    IntegratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.t_end = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.rel_tol = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK(parse_method("rk4") == Method::rk4);
    CHECK(parse_method("rk45") == Method::rk45);
    CHECK_THROWS_AS(parse_method("euler"), std::invalid_argument);
}

TEST_CASE("blow-up aborts with the time of failure") {
    // y' = y^2 from y(0) = 1 diverges at t = 1.
    FunctionSystem sys(1, [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; });
    IntegratorConfig cfg;
    cfg.t_end = 2.0;
    cfg.min_step = 1e-14;
    try {
        integrate_ode(sys, {1.0}, cfg, [](double, std::span<const double>) {});
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.time() == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("a lone Vicsek agent moves in a straight line") {
    ModelParams p;
    const SystemState s0{std::vector<AgentSV>{{{0.2, -0.1}, 0.0, 1.0}}, 0.0};
    IntegratorConfig cfg;
    cfg.t_end = 50.0;
    const Trajectory traj = integrate(s0, p, cfg);
    const auto& last = std::get<std::vector<AgentSV>>(traj.samples.back().agents)[0];
    CHECK(last.x.x == doctest::Approx(0.2 + 0.15).epsilon(1e-12));
    CHECK(last.x.y == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(last.theta == 0.0);
    CHECK(last.xi == 1.0);
    CHECK(traj.samples.size() == 51);
}

TEST_CASE("an equilibrium pair stays put") {
    ModelParams p;
    p.K = 1.0;
    const SystemState s0{std::vector<AgentBaseline>{{{0, 0}, 0.3}, {{1, 0}, 0.3}}, 0.0};
    IntegratorConfig cfg;
    cfg.t_end = 10.0;
    const Trajectory traj = integrate(s0, p, cfg);
    const auto& last = std::get<std::vector<AgentBaseline>>(traj.samples.back().agents);
    CHECK(std::abs(last[0].x.x) < 1e-9);
    CHECK(std::abs(last[1].x.x - 1.0) < 1e-9);
    CHECK(last[0].xi == doctest::Approx(0.3));
}

TEST_CASE("Cucker-Smale mean velocity is conserved by the solver") {
    ModelParams p;
    p.J = 0.5;
    p.K = -0.5;
    InitSpec spec;
    spec.box_length = 2.0;
    const SystemState s0 = init_random(ModelId::cucker_smale, spec, 60, 5);
    IntegratorConfig cfg;
    cfg.t_end = 5.0;
    const Trajectory traj = integrate(s0, p, cfg);
    auto mean_v = [](const SystemState& s) {
        Vec2 m;
        for (const auto& a : std::get<std::vector<AgentSCS>>(s.agents)) m += a.v;
        return m * (1.0 / static_cast<double>(s.size()));
    };
    const Vec2 a = mean_v(traj.samples.front()), b = mean_v(traj.samples.back());
    CHECK(std::abs(a.x - b.x) <= 10 * cfg.rel_tol);
    CHECK(std::abs(a.y - b.y) <= 10 * cfg.rel_tol);
}

TEST_CASE("integration is bit-reproducible and angles stay wrapped") {
    ModelParams p;
    p.J = 1.0;
    p.K = 1.0;
    p.r = 0.5;
    const SystemState s0 = init_random(ModelId::vicsek, {}, 40, 9);
    IntegratorConfig cfg;
    cfg.t_end = 2.0;
    cfg.sample_every = 0.5;
    cfg.rel_tol = 1e-3;
    cfg.abs_tol = 1e-6;
    const Trajectory a = integrate(s0, p, cfg, 9), b = integrate(s0, p, cfg, 9);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        CHECK(pack_state(a.samples[k]) == pack_state(b.samples[k]));
        for (const auto& ag : std::get<std::vector<AgentSV>>(a.samples[k].agents)) {
            CHECK(ag.theta > -kPi);
            CHECK(ag.theta <= kPi);
            CHECK(ag.xi > -kPi);
            CHECK(ag.xi <= kPi);
        }
    }
    CHECK(a.stats.accepted > 0);
    CHECK(a.seed == 9);
}

TEST_CASE("frozen neighborhoods and fixed steps also run") {
    ModelParams p;
    p.K = 1.0;
    p.r = 0.6;
    const SystemState s0 = init_random(ModelId::vicsek, {}, 30, 2);
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    cfg.freeze_neighbors = true;
    CHECK_NOTHROW(integrate(s0, p, cfg));
    cfg.method = Method::rk4;
    cfg.dt = 1e-3;
    const Trajectory t = integrate(s0, p, cfg);
    CHECK(t.stats.rhs_evals == 4 * t.stats.accepted);
}

TEST_CASE("pack and unpack round-trip") {
    oracle::Gen g(41);
    for (ModelId m : {ModelId::baseline, ModelId::vicsek, ModelId::cucker_smale}) {
        const SystemState s = init_random(m, {}, 7, 3);
        const auto y = pack_state(s);
        CHECK(pack_state(unpack_state(m, y, 0.0)) == y);
    }
    CHECK_THROWS_AS(unpack_state(ModelId::vicsek, std::vector<double>(5), 0.0), std::invalid_argument);
}
