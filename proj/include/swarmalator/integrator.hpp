#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmalator/model.hpp"

namespace swarm {

enum class Method { rk4, rk45 };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct IntegratorConfig {
    Method method{Method::rk45};
    double dt{0.01};            // rk4 step
    double rel_tol{1e-6};       // rk45
    double abs_tol{1e-9};       // rk45
    double t_end{50.0};
    double sample_every{1.0};
    /// Below this step the adaptive controller accepts finite steps regardless of the error estimate.
    double min_step{1e-9};
    /// Build the Vicsek neighbor list once per step instead of at every stage.
    bool freeze_neighbors{false};

    void validate() const;
};

struct SolverStats {
    std::uint64_t accepted{0};
    std::uint64_t rejected{0};
    std::uint64_t rhs_evals{0};
    std::uint64_t forced{0};  // steps taken at min_step despite a failing error estimate
};

/// Raised when the solver cannot continue (non-finite state or step-size underflow).
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

/// Step sizes below this abort the run.
inline constexpr double kStepUnderflow = 1e-12;

/// A first-order system on a flat state vector.
class OdeSystem {
public:
    virtual ~OdeSystem() = default;
    virtual std::size_t dim() const = 0;
    virtual void rhs(double t, std::span<const double> y, std::span<double> dydt) = 0;
    /// Called with the state at the start of every attempted step.
    virtual void begin_step(double /*t*/, std::span<const double> /*y*/) {}
    /// True when the last stage derivative of an accepted step equals the first stage of the next one.
    /// Angle re-wrapping by whole turns does not change any derivative.
    virtual bool fsal_safe() const { return true; }
    /// Called after every accepted step (angle re-wrapping).
    virtual void normalize(std::span<double> /*y*/) const {}
};

/// Adapts a plain callable to OdeSystem.
class FunctionSystem final : public OdeSystem {
public:
    using Fn = std::function<void(double, std::span<const double>, std::span<double>)>;
    FunctionSystem(std::size_t dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}
    std::size_t dim() const override { return dim_; }
    void rhs(double t, std::span<const double> y, std::span<double> dydt) override { fn_(t, y, dydt); }

private:
    std::size_t dim_;
    Fn fn_;
};

/// One classical RK4 step. Throws SolverError if any stage derivative is non-finite.
std::vector<double> step_rk4(OdeSystem& system, std::span<const double> y, double t, double dt);

/// Receives (t, y) at every sample time, including t = 0 and t_end.
using SampleObserver = std::function<void(double, std::span<const double>)>;

/// Integrates from t = 0 to cfg.t_end, stepping exactly onto each sample time.
SolverStats integrate_ode(OdeSystem& system, std::vector<double> y0, const IntegratorConfig& cfg,
                          const SampleObserver& observe);

/// Sample times 0, h, 2h, ..., with t_end always last.
std::vector<double> sample_times(double t_end, double sample_every);

struct Trajectory {
    ModelId model{ModelId::baseline};
    ModelParams params;
    IntegratorConfig integrator;
    std::uint64_t seed{0};
    SolverStats stats;
    std::vector<SystemState> samples;
};

/// Runs one model from `initial` and records the sampled states.
Trajectory integrate(const SystemState& initial, const ModelParams& p, const IntegratorConfig& cfg,
                     std::uint64_t seed = 0);

// Flat-vector packing used by the integrator; exposed for tests.
std::vector<double> pack_state(const SystemState& s);
SystemState unpack_state(ModelId model, std::span<const double> y, double t);

}  // namespace swarm
