#include "swarmalator/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmalator/neighbors.hpp"

namespace swarm {

namespace {

constexpr std::pair<StateLabel, std::string_view> kLabelNames[] = {
    {StateLabel::static_sync, "static-sync"},
    {StateLabel::static_async, "static-async"},
    {StateLabel::static_phase_wave, "static-phase-wave"},
    {StateLabel::splintered_phase_wave, "splintered-phase-wave"},
    {StateLabel::active_phase_wave, "active-phase-wave"},
    {StateLabel::gradient, "gradient"},
    {StateLabel::clustered, "clustered"},
    {StateLabel::unclassified, "unclassified"},
};

double mean_phasor_norm(std::span<const double> angles) {
    double c = 0.0, s = 0.0;
    for (double a : angles) {
        c += std::cos(a);
        s += std::sin(a);
    }
    const double n = static_cast<double>(angles.size());
    return std::min(1.0, std::hypot(c / n, s / n));
}

Vec2 centroid(std::span<const Vec2> positions) {
    Vec2 c;
    for (const auto& p : positions) c += p;
    return c * (1.0 / static_cast<double>(positions.size()));
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned char> rank_;
};

}  // namespace

std::string_view to_string(StateLabel label) {
    for (const auto& [l, name] : kLabelNames) {
        if (l == label) return name;
    }
    return "unclassified";
}

StateLabel parse_state_label(std::string_view name) {
    for (const auto& [l, n] : kLabelNames) {
        if (n == name) return l;
    }
    throw std::invalid_argument("unknown state label '" + std::string(name) + "'");
}

double kuramoto_R(std::span<const double> phases) {
    if (phases.empty()) throw std::invalid_argument("kuramoto_R: empty phase list");
    return mean_phasor_norm(phases);
}

double heading_R(std::span<const double> headings) {
    return headings.empty() ? 0.0 : mean_phasor_norm(headings);
}

double heading_R(std::span<const Vec2> velocities) {
    std::vector<double> angles;
    angles.reserve(velocities.size());
    for (const auto& v : velocities) {
        if (v.x != 0.0 || v.y != 0.0) angles.push_back(v.angle());
    }
    return heading_R(angles);
}

PhaseWave phase_wave_S(std::span<const Vec2> positions, std::span<const double> phases) {
    if (positions.size() != phases.size()) throw std::invalid_argument("phase_wave_S: size mismatch");
    if (positions.size() < 2) throw std::invalid_argument("phase_wave_S: requires at least 2 agents");
    const Vec2 c = centroid(positions);
    std::complex<double> plus{0.0, 0.0}, minus{0.0, 0.0};
    std::size_t used = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const Vec2 d = positions[k] - c;
        if (d.norm() <= 1e-12) continue;
        const double psi = d.angle();
        plus += std::polar(1.0, psi + phases[k]);
        minus += std::polar(1.0, psi - phases[k]);
        ++used;
    }
    if (used == 0) throw std::invalid_argument("phase_wave_S: all agents coincide with the centroid");
    const double n = static_cast<double>(positions.size());
    return {std::min(1.0, std::abs(plus) / n), std::min(1.0, std::abs(minus) / n)};
}

std::size_t cluster_count(std::span<const Vec2> positions, std::span<const double> phases, double eps_x,
                          double eps_xi, std::size_t min_size) {
    if (positions.size() != phases.size()) throw std::invalid_argument("cluster_count: size mismatch");
    if (!(eps_x > 0.0) || !(eps_xi > 0.0)) throw std::invalid_argument("cluster_count: eps must be > 0");
    const std::size_t n = positions.size();
    if (n == 0) return 0;
    const NeighborList nl = neighbors_grid(positions, eps_x, false);
    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const std::uint32_t j : nl.of(i)) {
            if (j > i && std::abs(wrap_angle(phases[j] - phases[i])) <= eps_xi) sets.unite(i, j);
        }
    }
    std::vector<std::size_t> size(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++size[sets.find(i)];
    return static_cast<std::size_t>(
        std::count_if(size.begin(), size.end(), [&](std::size_t s) { return s > 0 && s >= min_size; }));
}

std::size_t ClassifierConfig::min_cluster_size(std::size_t n) const {
    const auto by_fraction = static_cast<std::size_t>(std::ceil(min_cluster_fraction * static_cast<double>(n)));
    return std::min(n, std::max<std::size_t>(2, by_fraction));
}

double pattern_diameter(std::span<const Vec2> positions) {
    double best = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (std::size_t j = i + 1; j < positions.size(); ++j) {
            best = std::max(best, (positions[j] - positions[i]).norm2());
        }
    }
    return std::sqrt(best);
}

double local_phase_coherence(std::span<const Vec2> positions, std::span<const double> phases, double radius) {
    if (positions.empty()) return 0.0;
    const NeighborList nl = neighbors_grid(positions, radius, true);
    double total = 0.0;
    std::vector<double> local;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        local.clear();
        for (const std::uint32_t j : nl.of(i)) local.push_back(phases[j]);
        total += mean_phasor_norm(local);
    }
    return total / static_cast<double>(positions.size());
}

double relative_speed(std::span<const Vec2> before, std::span<const Vec2> after, double dt) {
    if (before.size() != after.size() || before.empty()) throw std::invalid_argument("relative_speed: bad sizes");
    if (!(dt > 0.0)) throw std::invalid_argument("relative_speed: dt must be > 0");
    const Vec2 shift = centroid(after) - centroid(before);
    double total = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i) total += (after[i] - before[i] - shift).norm();
    return total / (static_cast<double>(before.size()) * dt);
}

ObservableSummary snapshot_summary(const SystemState& state, const ClassifierConfig& cfg) {
    ObservableSummary s;
    s.t = state.t;
    const auto pos = state.positions();
    const auto ph = state.phases();
    s.R_phase = kuramoto_R(ph);
    if (const auto* scs = std::get_if<std::vector<AgentSCS>>(&state.agents)) {
        std::vector<Vec2> v;
        for (const auto& a : *scs) v.push_back(a.v);
        s.R_heading = heading_R(std::span<const Vec2>(v));
    } else {
        const auto headings = state.orientations();
        s.R_heading = heading_R(std::span<const double>(headings));
    }
    if (pos.size() >= 2) {
        try {
            const PhaseWave w = phase_wave_S(pos, ph);
            s.S_plus = w.plus;
            s.S_minus = w.minus;
        } catch (const std::invalid_argument&) {
            s.S_plus = s.S_minus = 0.0;
        }
    }
    s.diameter = pattern_diameter(pos);
    const double eps_x = s.diameter > 0.0 ? cfg.eps_x_fraction * s.diameter : 1.0;
    s.n_clusters = std::max<std::size_t>(1, cluster_count(pos, ph, eps_x, cfg.eps_xi, cfg.min_cluster_size(pos.size())));
    s.local_R = local_phase_coherence(pos, ph, eps_x);
    return s;
}

StateLabel decide(const ObservableSummary& s, std::size_t n_agents, const ClassifierConfig& cfg) {
    const bool is_static = s.mean_speed < cfg.tau_static();
    const bool clustered = static_cast<double>(s.n_clusters) >= cfg.tau_clusters && s.n_clusters <= n_agents / 4;
    const double wave = std::max(s.S_plus, s.S_minus);
    if (is_static) {
        if (s.R_phase > cfg.tau_R) return StateLabel::static_sync;
        if (wave > cfg.tau_S) return StateLabel::static_phase_wave;
        if (s.R_phase < cfg.tau_async) {
            return s.local_R > cfg.tau_local ? StateLabel::gradient : StateLabel::static_async;
        }
        if (clustered) return StateLabel::clustered;
        return StateLabel::unclassified;
    }
    if (clustered) return StateLabel::splintered_phase_wave;
    if (wave > cfg.tau_S) return StateLabel::active_phase_wave;
    return StateLabel::unclassified;
}

ObservableSummary classify(const Trajectory& traj, double window, const ClassifierConfig& cfg) {
    if (!(window > 0.0)) throw std::invalid_argument("classify: window must be > 0");
    if (traj.samples.size() < 2) throw std::invalid_argument("classify: trajectory has fewer than 2 samples");
    const double t_last = traj.samples.back().t;
    const double span = t_last - traj.samples.front().t;
    if (span < 2.0 * window * (1.0 - 1e-12)) {
        throw std::invalid_argument("classify: trajectory shorter than twice the window");
    }
    // First sample inside the tail window.
    std::size_t first = traj.samples.size() - 1;
    while (first > 0 && traj.samples[first - 1].t >= t_last - window * (1.0 + 1e-12)) --first;
    if (first == traj.samples.size() - 1) --first;

    ObservableSummary out = snapshot_summary(traj.samples.back(), cfg);
    double r_phase = 0.0, r_heading = 0.0, s_plus = 0.0, s_minus = 0.0, local = 0.0, speed = 0.0;
    std::size_t count = 0;
    for (std::size_t k = first; k < traj.samples.size(); ++k) {
        const ObservableSummary s = (k + 1 == traj.samples.size()) ? out : snapshot_summary(traj.samples[k], cfg);
        r_phase += s.R_phase;
        r_heading += s.R_heading;
        s_plus += s.S_plus;
        s_minus += s.S_minus;
        local += s.local_R;
        ++count;
        if (k > first) {
            const auto& a = traj.samples[k - 1];
            const auto& b = traj.samples[k];
            speed += relative_speed(a.positions(), b.positions(), b.t - a.t) * (b.t - a.t);
        }
    }
    const double c = static_cast<double>(count);
    out.R_phase = r_phase / c;
    out.R_heading = r_heading / c;
    out.S_plus = s_plus / c;
    out.S_minus = s_minus / c;
    out.local_R = local / c;
    out.mean_speed = speed / (t_last - traj.samples[first].t);
    out.label = decide(out, traj.samples.back().size(), cfg);
    return out;
}

}  // namespace swarm
