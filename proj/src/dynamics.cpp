#include "swarmalator/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace swarm {

namespace {

constexpr double kCoincident2 = kCoincidentDistance * kCoincidentDistance;

inline double cs_rate(double d2, const ModelParams& p) {
    if (p.cs_beta == 1.0) return p.cs_H / (1.0 + d2);
    if (p.cs_beta == 0.0) return p.cs_H;
    if (p.cs_beta == 0.5) return p.cs_H / std::sqrt(1.0 + d2);
    return p.cs_H / std::pow(1.0 + d2, p.cs_beta);
}

template <typename Out>
void check_sizes(std::size_t n, const Out& out) {
    if (out.size() != n) throw std::invalid_argument("rhs: output size does not match agent count");
}

// Structure-of-arrays scratch for the all-to-all models.
struct PairBuffers {
    explicit PairBuffers(std::size_t n)
        : x(n), y(n), vx(n), vy(n), c(n), s(n), ax(n, 0.0), ay(n, 0.0), aph(n, 0.0) {}

    void load(std::size_t i, Vec2 pos, Vec2 vel, double xi) {
        x[i] = pos.x;
        y[i] = pos.y;
        vx[i] = vel.x;
        vy[i] = vel.y;
        c[i] = std::cos(xi);
        s[i] = std::sin(xi);
    }

    std::vector<double> x, y, vx, vy, c, s;
    std::vector<double> ax, ay, aph;  // unnormalized sums: spatial (+ alignment) and phase
};

// Every pair summand is antisymmetric under i <-> j (the kernels are even in the phase difference and
// multiply a difference vector, or are odd in it), so each unordered pair is evaluated once and added to
// row i and subtracted from row j. The evaluation order is fixed, so results are reproducible.
void accumulate_pairs(PairBuffers& b, const ModelParams& p, bool align) {
    const std::size_t n = b.x.size();
    const double A = p.A, B = p.B, J = p.J, H = p.cs_H;
    const bool cs_simple = p.cs_beta == 1.0;
    double* __restrict ax = b.ax.data();
    double* __restrict ay = b.ay.data();
    double* __restrict aph = b.aph.data();
    const double* __restrict x = b.x.data();
    const double* __restrict y = b.y.data();
    const double* __restrict vx = b.vx.data();
    const double* __restrict vy = b.vy.data();
    const double* __restrict c = b.c.data();
    const double* __restrict s = b.s.data();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double xi = x[i], yi = y[i], vxi = vx[i], vyi = vy[i], ci = c[i], si = s[i];
        double fx = 0.0, fy = 0.0, ph = 0.0;
        if (align && !cs_simple) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = x[j] - xi, dy = y[j] - yi;
                const double a = cs_rate(dx * dx + dy * dy, p);
                const double tx = a * (vx[j] - vxi), ty = a * (vy[j] - vyi);
                fx += tx;
                fy += ty;
                ax[j] -= tx;
                ay[j] -= ty;
            }
        }
#pragma omp simd reduction(+ : fx, fy, ph)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[j] - xi;
            const double dy = y[j] - yi;
            const double d2 = dx * dx + dy * dy;
            const bool far = d2 >= kCoincident2;
            const double inv_d = far ? 1.0 / std::sqrt(far ? d2 : 1.0) : 0.0;
            const double cos_s = c[j] * ci + s[j] * si;
            const double sin_s = s[j] * ci - c[j] * si;
            const double w = (A + J * cos_s) * inv_d - B * inv_d * inv_d;
            double tx = w * dx, ty = w * dy;
            if (align && cs_simple) {
                const double a = H / (1.0 + d2);
                tx += a * (vx[j] - vxi);
                ty += a * (vy[j] - vyi);
            }
            const double tp = sin_s * inv_d;
            fx += tx;
            fy += ty;
            ph += tp;
            ax[j] -= tx;
            ay[j] -= ty;
            aph[j] -= tp;
        }
        ax[i] += fx;
        ay[i] += fy;
        aph[i] += ph;
    }
}

}  // namespace

void rhs_baseline(std::span<const AgentBaseline> agents, const ModelParams& p, std::span<RateBaseline> out) {
    const std::size_t n = agents.size();
    if (n < 2) throw std::invalid_argument("rhs_baseline: requires at least 2 agents");
    check_sizes(n, out);
    PairBuffers buf(n);
    for (std::size_t i = 0; i < n; ++i) buf.load(i, agents[i].x, {}, agents[i].xi);
    accumulate_pairs(buf, p, false);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].dx = {buf.ax[i] * inv_n, buf.ay[i] * inv_n};
        out[i].dxi = p.omega_of(i) + p.K * buf.aph[i] * inv_n;
    }
}

std::vector<RateBaseline> rhs_baseline(std::span<const AgentBaseline> agents, const ModelParams& p) {
    std::vector<RateBaseline> out(agents.size());
    rhs_baseline(agents, p, out);
    return out;
}

void rhs_sv(std::span<const AgentSV> agents, const ModelParams& p, const NeighborList& nl, std::span<RateSV> out) {
    const std::size_t n = agents.size();
    if (n < 1) throw std::invalid_argument("rhs_sv: requires at least 1 agent");
    if (nl.size() != n) throw std::invalid_argument("rhs_sv: neighbor list size does not match agent count");
    check_sizes(n, out);
    std::vector<double> xs(n), ys(n), th(n), cs(n), sn(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = agents[i].x.x;
        ys[i] = agents[i].x.y;
        th[i] = agents[i].theta;
        cs[i] = std::cos(agents[i].xi);
        sn[i] = std::sin(agents[i].xi);
    }
    const double A = p.A, B = p.B, J = p.J;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = xs[i], yi = ys[i], ti = th[i], ci = cs[i], si = sn[i];
        double fx = 0.0, fy = 0.0, heading = 0.0, phase = 0.0;
        const auto row = nl.of(i);
        const std::uint32_t* idx = row.data();
        const std::size_t m = row.size();
        // The self entry has zero distance and zero heading difference, so it drops out.
#pragma omp simd reduction(+ : fx, fy, heading, phase)
        for (std::size_t k = 0; k < m; ++k) {
            const std::uint32_t j = idx[k];
            const double dth = th[j] - ti;
            const double wrapped = dth - kTwoPi * std::nearbyint(dth * (1.0 / kTwoPi));
            heading += wrapped == -kPi ? kPi : wrapped;
            const double dx = xs[j] - xi;
            const double dy = ys[j] - yi;
            const double d2 = dx * dx + dy * dy;
            const bool far = d2 >= kCoincident2;
            const double inv_d = far ? 1.0 / std::sqrt(far ? d2 : 1.0) : 0.0;
            const double cos_s = cs[j] * ci + sn[j] * si;
            const double sin_s = sn[j] * ci - cs[j] * si;
            const double w = (A + J * cos_s) * inv_d - B * inv_d * inv_d;
            fx += w * dx;
            fy += w * dy;
            phase += sin_s * inv_d;
        }
        const double inv = m == 0 ? 0.0 : 1.0 / static_cast<double>(m);
        out[i].dx = {p.v0 * std::cos(ti) + fx * inv, p.v0 * std::sin(ti) + fy * inv};
        out[i].dtheta = heading * inv;
        out[i].dxi = p.omega_of(i) + p.K * phase * inv;
    }
}

std::vector<RateSV> rhs_sv(std::span<const AgentSV> agents, const ModelParams& p, const NeighborList& nl) {
    std::vector<RateSV> out(agents.size());
    rhs_sv(agents, p, nl, out);
    return out;
}

void rhs_scs(std::span<const AgentSCS> agents, const ModelParams& p, std::span<RateSCS> out) {
    const std::size_t n = agents.size();
    if (n < 2) throw std::invalid_argument("rhs_scs: requires at least 2 agents");
    check_sizes(n, out);
    PairBuffers buf(n);
    for (std::size_t i = 0; i < n; ++i) buf.load(i, agents[i].x, agents[i].v, agents[i].xi);
    accumulate_pairs(buf, p, true);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].dx = agents[i].v;
        out[i].dv = {buf.ax[i] * inv_n, buf.ay[i] * inv_n};
        out[i].dxi = p.omega_of(i) + p.K * buf.aph[i] * inv_n;
    }
}

std::vector<RateSCS> rhs_scs(std::span<const AgentSCS> agents, const ModelParams& p) {
    std::vector<RateSCS> out(agents.size());
    rhs_scs(agents, p, out);
    return out;
}

}  // namespace swarm
