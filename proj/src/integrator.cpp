#include "swarmalator/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <memory>
#include <type_traits>
#include <sstream>

#include "swarmalator/dynamics.hpp"
#include "swarmalator/neighbors.hpp"

namespace swarm {

std::string_view to_string(Method m) { return m == Method::rk4 ? "rk4" : "rk45"; }

Method parse_method(std::string_view name) {
    if (name == "rk4") return Method::rk4;
    if (name == "rk45") return Method::rk45;
    throw std::invalid_argument("unknown integrator method '" + std::string(name) + "'");
}

void IntegratorConfig::validate() const {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string("integrator.") + field + ": must be finite and > 0");
        }
    };
    positive(dt, "dt");
    positive(rel_tol, "rel_tol");
    positive(abs_tol, "abs_tol");
    positive(t_end, "t_end");
    positive(sample_every, "sample_every");
    positive(min_step, "min_step");
}

std::vector<double> sample_times(double t_end, double sample_every) {
    std::vector<double> times;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * sample_every;
        if (t > t_end * (1.0 - 1e-12)) break;
        times.push_back(t);
    }
    times.push_back(t_end);
    return times;
}

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

[[noreturn]] void fail_at(double t, const std::string& what) {
    std::ostringstream os;
    os << what << " at t = " << t;
    throw SolverError(os.str(), t);
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class Rk45Driver {
public:
    Rk45Driver(OdeSystem& sys, const IntegratorConfig& cfg, SolverStats& stats)
        : sys_(sys), cfg_(cfg), stats_(stats), n_(sys.dim()) {
        for (auto& k : k_) k.resize(n_);
        ytmp_.resize(n_);
        ynew_.resize(n_);
    }

    // Advances y from t to exactly t_target.
    void advance(double& t, std::vector<double>& y, double t_target) {
        if (!have_fsal_) {
            sys_.begin_step(t, y);
            eval(t, y, k_[0]);
            if (!all_finite(k_[0])) fail_at(t, "non-finite derivative");
            have_fsal_ = true;
            if (h_ <= 0.0) h_ = initial_step(t, y, t_target);
        }
        while (t < t_target) {
            const double remaining = t_target - t;
            double h = std::min(h_, remaining);
            // Stretch a step that would leave a sliver before the target.
            if (remaining - h < 1e-3 * h) h = remaining;
            const bool clamped = h < h_;
            bool last_rejected = false;
            for (;;) {
                if (h < kStepUnderflow) fail_at(t, "step size underflow");
                sys_.begin_step(t, y);
                const double err = attempt(t, y, h);
                const bool finite = std::isfinite(err) && all_finite(ynew_);
                if (finite && (err <= 1.0 || h <= cfg_.min_step)) {
                    if (err > 1.0) note_forced(t, h);
                    const bool hit = (h >= remaining);
                    t = hit ? t_target : t + h;
                    y.swap(ynew_);
                    sys_.normalize(y);
                    if (sys_.fsal_safe()) {
                        std::swap(k_[0], k_[6]);
                    } else {
                        sys_.begin_step(t, y);
                        eval(t, y, k_[0]);
                        if (!all_finite(k_[0])) fail_at(t, "non-finite derivative");
                    }
                    ++stats_.accepted;
                    const double next = propose(h, err, last_rejected);
                    if (!(clamped && hit)) h_ = next;
                    break;
                }
                ++stats_.rejected;
                last_rejected = true;
                if (!finite) {
                    h *= 0.25;
                } else {
                    const double fac11 = std::pow(err, kExpo1);
                    h = std::max(h / std::min(kFacInvMin, fac11 / kSafety), cfg_.min_step);
                }
                h_ = h;
            }
        }
    }

private:
    static constexpr double kBeta = 0.04;
    static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
    static constexpr double kSafety = 0.9;
    static constexpr double kFacInvMin = 5.0;   // step may shrink by at most 5x
    static constexpr double kFacInvMax = 0.1;   // and grow by at most 10x

    void eval(double t, std::span<const double> y, std::vector<double>& out) {
        sys_.rhs(t, y, out);
        ++stats_.rhs_evals;
    }

    double initial_step(double t, std::span<const double> y, double t_target) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sc = scale(y[i], y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k_[0][i] / sc) * (k_[0][i] / sc);
        }
        d0 = std::sqrt(d0 / static_cast<double>(n_));
        d1 = std::sqrt(d1 / static_cast<double>(n_));
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t_target - t);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h0 * k_[0][i];
        eval(t + h0, ytmp_, k_[1]);
        double d2 = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sc = scale(y[i], y[i]);
            const double v = (k_[1][i] - k_[0][i]) / sc;
            d2 += v * v;
        }
        d2 = std::sqrt(d2 / static_cast<double>(n_)) / h0;
        const double dmax = std::max(d1, d2);
        const double h1 = (dmax <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
        double h = std::min(100.0 * h0, h1);
        if (!std::isfinite(h) || h <= 0.0) h = 1e-6;
        return std::max(h, cfg_.min_step);
    }

    double scale(double a, double b) const {
        return std::max(cfg_.abs_tol, cfg_.rel_tol * std::max(std::abs(a), std::abs(b)));
    }

    template <typename F>
    void stage(std::span<const double> y, double h, F&& combo, std::vector<double>& out_state) {
        for (std::size_t i = 0; i < n_; ++i) out_state[i] = y[i] + h * combo(i);
    }

    // Computes ynew_ and k_[1..6]; returns the scaled RMS error estimate.
    double attempt(double t, std::span<const double> y, double h) {
        auto& k = k_;
        stage(y, h, [&](std::size_t i) { return a21 * k[0][i]; }, ytmp_);
        eval(t + c2 * h, ytmp_, k[1]);
        stage(y, h, [&](std::size_t i) { return a31 * k[0][i] + a32 * k[1][i]; }, ytmp_);
        eval(t + c3 * h, ytmp_, k[2]);
        stage(y, h, [&](std::size_t i) { return a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]; }, ytmp_);
        eval(t + c4 * h, ytmp_, k[3]);
        stage(
            y, h, [&](std::size_t i) { return a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]; },
            ytmp_);
        eval(t + c5 * h, ytmp_, k[4]);
        stage(
            y, h,
            [&](std::size_t i) {
                return a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] + a65 * k[4][i];
            },
            ytmp_);
        eval(t + h, ytmp_, k[5]);
        stage(
            y, h,
            [&](std::size_t i) {
                return a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i];
            },
            ynew_);
        eval(t + h, ynew_, k[6]);
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] +
                                  e7 * k[6][i]);
            const double r = e / scale(y[i], ynew_[i]);
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(n_));
    }

    double propose(double h, double err, bool last_rejected) {
        const double fac11 = std::pow(std::max(err, 1e-300), kExpo1);
        double fac = fac11 / std::pow(facold_, kBeta);
        fac = std::clamp(fac / kSafety, kFacInvMax, kFacInvMin);
        double hnew = h / fac;
        if (last_rejected) hnew = std::min(hnew, h);
        facold_ = std::max(err, 1e-4);
        return std::max(hnew, cfg_.min_step);
    }

    void note_forced(double t, double h) {
        if (stats_.forced == 0) {
            std::clog << "warning: error control could not be met near t = " << t << "; stepping at minimum step "
                      << h << '\n';
        }
        ++stats_.forced;
    }

    OdeSystem& sys_;
    const IntegratorConfig& cfg_;
    SolverStats& stats_;
    std::size_t n_;
    std::array<std::vector<double>, 7> k_;
    std::vector<double> ytmp_, ynew_;
    double h_{0.0};
    double facold_{1e-4};
    bool have_fsal_{false};
};

}  // namespace

std::vector<double> step_rk4(OdeSystem& system, std::span<const double> y, double t, double dt) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto checked = [&](double ts, std::span<const double> ys, std::vector<double>& k) {
        system.rhs(ts, ys, k);
        if (!all_finite(k)) fail_at(ts, "non-finite derivative");
    };
    system.begin_step(t, y);
    checked(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    checked(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    checked(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
    checked(t + dt, tmp, k4);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

SolverStats integrate_ode(OdeSystem& system, std::vector<double> y, const IntegratorConfig& cfg,
                          const SampleObserver& observe) {
    cfg.validate();
    if (y.size() != system.dim()) throw std::invalid_argument("integrate_ode: state size does not match system");
    if (!all_finite(y)) throw std::invalid_argument("integrate_ode: non-finite initial state");
    SolverStats stats;
    const std::vector<double> times = sample_times(cfg.t_end, cfg.sample_every);
    system.normalize(y);
    double t = 0.0;
    observe(t, y);
    if (cfg.method == Method::rk4) {
        for (std::size_t s = 1; s < times.size(); ++s) {
            const double target = times[s];
            while (t < target) {
                const double h = std::min(cfg.dt, target - t);
                y = step_rk4(system, y, t, h);
                stats.rhs_evals += 4;
                ++stats.accepted;
                t = (h >= target - t) ? target : t + h;
                system.normalize(y);
            }
            observe(t, y);
        }
        return stats;
    }
    Rk45Driver driver(system, cfg, stats);
    for (std::size_t s = 1; s < times.size(); ++s) {
        driver.advance(t, y, times[s]);
        observe(t, y);
    }
    return stats;
}

// ---------------------------------------------------------------------------------------------------------------
// Model adaptors

namespace {

constexpr std::size_t stride(ModelId m) {
    switch (m) {
        case ModelId::baseline: return 3;
        case ModelId::vicsek: return 4;
        case ModelId::cucker_smale: return 5;
    }
    return 0;
}

template <typename Agent>
std::vector<Agent> unpack_agents(std::span<const double> y);

template <>
std::vector<AgentBaseline> unpack_agents(std::span<const double> y) {
    std::vector<AgentBaseline> a(y.size() / 3);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = {{y[3 * i], y[3 * i + 1]}, y[3 * i + 2]};
    return a;
}

template <>
std::vector<AgentSV> unpack_agents(std::span<const double> y) {
    std::vector<AgentSV> a(y.size() / 4);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = {{y[4 * i], y[4 * i + 1]}, y[4 * i + 2], y[4 * i + 3]};
    return a;
}

template <>
std::vector<AgentSCS> unpack_agents(std::span<const double> y) {
    std::vector<AgentSCS> a(y.size() / 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = {{y[5 * i], y[5 * i + 1]}, {y[5 * i + 2], y[5 * i + 3]}, y[5 * i + 4]};
    }
    return a;
}

class BaselineSystem final : public OdeSystem {
public:
    BaselineSystem(std::size_t n, const ModelParams& p) : n_(n), p_(p), rates_(n) {}
    std::size_t dim() const override { return 3 * n_; }
    void rhs(double, std::span<const double> y, std::span<double> dydt) override {
        const auto agents = unpack_agents<AgentBaseline>(y);
        rhs_baseline(agents, p_, rates_);
        for (std::size_t i = 0; i < n_; ++i) {
            dydt[3 * i] = rates_[i].dx.x;
            dydt[3 * i + 1] = rates_[i].dx.y;
            dydt[3 * i + 2] = rates_[i].dxi;
        }
    }
    void normalize(std::span<double> y) const override {
        for (std::size_t i = 0; i < n_; ++i) y[3 * i + 2] = wrap_angle(y[3 * i + 2]);
    }

private:
    std::size_t n_;
    const ModelParams& p_;
    std::vector<RateBaseline> rates_;
};

class VicsekSystem final : public OdeSystem {
public:
    VicsekSystem(std::size_t n, const ModelParams& p, bool freeze) : n_(n), p_(p), freeze_(freeze), rates_(n) {}
    std::size_t dim() const override { return 4 * n_; }
    bool fsal_safe() const override { return !freeze_; }
    void begin_step(double, std::span<const double> y) override {
        if (freeze_) frozen_ = neighbors_grid(positions(y), p_.r, p_.include_self);
    }
    void rhs(double, std::span<const double> y, std::span<double> dydt) override {
        const auto agents = unpack_agents<AgentSV>(y);
        if (freeze_) {
            rhs_sv(agents, p_, frozen_, rates_);
        } else {
            const NeighborList nl = neighbors_grid(positions(y), p_.r, p_.include_self);
            rhs_sv(agents, p_, nl, rates_);
        }
        for (std::size_t i = 0; i < n_; ++i) {
            dydt[4 * i] = rates_[i].dx.x;
            dydt[4 * i + 1] = rates_[i].dx.y;
            dydt[4 * i + 2] = rates_[i].dtheta;
            dydt[4 * i + 3] = rates_[i].dxi;
        }
    }
    void normalize(std::span<double> y) const override {
        for (std::size_t i = 0; i < n_; ++i) {
            y[4 * i + 2] = wrap_angle(y[4 * i + 2]);
            y[4 * i + 3] = wrap_angle(y[4 * i + 3]);
        }
    }

private:
    std::vector<Vec2> positions(std::span<const double> y) {
        std::vector<Vec2> pos(n_);
        for (std::size_t i = 0; i < n_; ++i) pos[i] = {y[4 * i], y[4 * i + 1]};
        // A blown-up stage state is reported through the derivative, not the neighbor search.
        for (auto& q : pos) {
            if (!std::isfinite(q.x) || !std::isfinite(q.y)) q = {std::nan(""), std::nan("")};
        }
        return pos;
    }

    std::size_t n_;
    const ModelParams& p_;
    bool freeze_;
    std::vector<RateSV> rates_;
    NeighborList frozen_;
};

class CuckerSmaleSystem final : public OdeSystem {
public:
    CuckerSmaleSystem(std::size_t n, const ModelParams& p) : n_(n), p_(p), rates_(n) {}
    std::size_t dim() const override { return 5 * n_; }
    void rhs(double, std::span<const double> y, std::span<double> dydt) override {
        const auto agents = unpack_agents<AgentSCS>(y);
        rhs_scs(agents, p_, rates_);
        for (std::size_t i = 0; i < n_; ++i) {
            dydt[5 * i] = rates_[i].dx.x;
            dydt[5 * i + 1] = rates_[i].dx.y;
            dydt[5 * i + 2] = rates_[i].dv.x;
            dydt[5 * i + 3] = rates_[i].dv.y;
            dydt[5 * i + 4] = rates_[i].dxi;
        }
    }
    void normalize(std::span<double> y) const override {
        for (std::size_t i = 0; i < n_; ++i) y[5 * i + 4] = wrap_angle(y[5 * i + 4]);
    }

private:
    std::size_t n_;
    const ModelParams& p_;
    std::vector<RateSCS> rates_;
};

}  // namespace

std::vector<double> pack_state(const SystemState& s) {
    std::vector<double> y;
    std::visit(
        [&](const auto& list) {
            using Agent = typename std::decay_t<decltype(list)>::value_type;
            for (const Agent& a : list) {
                y.push_back(a.x.x);
                y.push_back(a.x.y);
                if constexpr (std::is_same_v<Agent, AgentSV>) y.push_back(a.theta);
                if constexpr (std::is_same_v<Agent, AgentSCS>) {
                    y.push_back(a.v.x);
                    y.push_back(a.v.y);
                }
                y.push_back(a.xi);
            }
        },
        s.agents);
    return y;
}

SystemState unpack_state(ModelId model, std::span<const double> y, double t) {
    if (y.size() % stride(model) != 0) throw std::invalid_argument("unpack_state: size is not a whole agent count");
    SystemState s;
    s.t = t;
    switch (model) {
        case ModelId::baseline: s.agents = unpack_agents<AgentBaseline>(y); break;
        case ModelId::vicsek: s.agents = unpack_agents<AgentSV>(y); break;
        case ModelId::cucker_smale: s.agents = unpack_agents<AgentSCS>(y); break;
    }
    return s;
}

Trajectory integrate(const SystemState& initial, const ModelParams& p, const IntegratorConfig& cfg,
                     std::uint64_t seed) {
    const std::size_t n = initial.size();
    const ModelId model = initial.model();
    if (n == 0) throw std::invalid_argument("integrate: state has no agents");
    if (model != ModelId::vicsek && n < 2) throw std::invalid_argument("integrate: model requires N >= 2");
    p.validate(model, n);
    cfg.validate();

    Trajectory traj;
    traj.model = model;
    traj.params = p;
    traj.integrator = cfg;
    traj.seed = seed;
    auto observe = [&](double t, std::span<const double> y) { traj.samples.push_back(unpack_state(model, y, t)); };

    std::unique_ptr<OdeSystem> system;
    switch (model) {
        case ModelId::baseline: system = std::make_unique<BaselineSystem>(n, traj.params); break;
        case ModelId::vicsek: system = std::make_unique<VicsekSystem>(n, traj.params, cfg.freeze_neighbors); break;
        case ModelId::cucker_smale: system = std::make_unique<CuckerSmaleSystem>(n, traj.params); break;
    }
    traj.stats = integrate_ode(*system, pack_state(initial), cfg, observe);
    return traj;
}

}  // namespace swarm
