#include "swarmalator/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "swarmalator/io.hpp"

namespace swarm {

namespace {

constexpr double kSize = 640.0;
constexpr double kMargin = 64.0;

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct Axis {
    double lo;
    double hi;
    double to_px(double v, bool flip) const {
        const double f = (v - lo) / (hi - lo);
        return flip ? kSize - kMargin - f * (kSize - 2 * kMargin) : kMargin + f * (kSize - 2 * kMargin);
    }
};

}  // namespace

std::size_t nearest_sample(const Trajectory& traj, double at) {
    if (traj.samples.empty()) throw std::invalid_argument("nearest_sample: empty trajectory");
    std::size_t best = 0;
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        if (std::abs(traj.samples[k].t - at) < std::abs(traj.samples[best].t - at)) best = k;
    }
    return best;
}

std::string angle_color(double a) {
    const double hue = (wrap_angle(a) + kPi) / kTwoPi * 360.0;
    return "hsl(" + fixed(hue, 1) + ",75%,45%)";
}

std::string render_scatter(const Trajectory& traj, PlotMode mode, double at) {
    if (traj.samples.empty()) throw std::invalid_argument("render_scatter: empty trajectory");
    const SystemState& s = traj.samples[nearest_sample(traj, at)];
    const auto pos = s.positions();
    const auto phases = s.phases();
    const auto orient = s.orientations();
    const std::size_t n = pos.size();

    std::vector<double> u(n), v(n), hue(n);
    Axis ax{-kPi, kPi}, ay{-kPi, kPi};
    std::string xlabel = "psi", ylabel = "xi", color_by;
    if (mode == PlotMode::spatial) {
        double lo = pos[0].x, hi = pos[0].x;
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = pos[i].x;
            v[i] = pos[i].y;
            hue[i] = phases[i];
            lo = std::min({lo, u[i], v[i]});
            hi = std::max({hi, u[i], v[i]});
        }
        const double pad = std::max(1e-9, 0.05 * (hi - lo));
        ax = ay = {lo - pad, hi + pad};
        xlabel = "x";
        ylabel = "y";
        color_by = "phase xi";
    } else {
        Vec2 c;
        for (const auto& p : pos) c += p;
        c *= 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = (pos[i] - c).angle();
            v[i] = phases[i];
            hue[i] = orient.empty() ? phases[i] : orient[i];
        }
        color_by = orient.empty() ? "phase xi" : (traj.model == ModelId::vicsek ? "heading theta" : "velocity angle");
    }

    const auto& p = traj.params;
    std::ostringstream title;
    title << to_string(traj.model) << "  N=" << n << "  r=" << p.r << "  J=" << p.J << "  K=" << p.K
          << "  T=" << s.t;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
        << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
        << "<title>" << title.str() << " (nearest sample to t=" << at << " is t=" << s.t << ")</title>\n"
        << "<desc>" << to_string(mode) << " scatter, color = " << color_by << "; swarmalator "
        << artifact_version() << "</desc>\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kSize / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">"
        << title.str() << "</text>\n";

    // Frame, ticks and labels.
    const double x0 = kMargin, x1 = kSize - kMargin, y0 = kMargin, y1 = kSize - kMargin;
    svg << "<g stroke=\"black\" fill=\"none\" stroke-width=\"1\">\n"
        << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0 << "\" height=\"" << y1 - y0
        << "\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double f = k / 4.0;
        const double px = x0 + f * (x1 - x0), py = y1 - f * (y1 - y0);
        svg << "<line x1=\"" << fixed(px) << "\" y1=\"" << y1 << "\" x2=\"" << fixed(px) << "\" y2=\"" << y1 + 5
            << "\"/>\n"
            << "<line x1=\"" << x0 - 5 << "\" y1=\"" << fixed(py) << "\" x2=\"" << x0 << "\" y2=\"" << fixed(py)
            << "\"/>\n";
    }
    svg << "</g>\n<g font-size=\"11\" font-family=\"sans-serif\">\n";
    for (int k = 0; k <= 4; ++k) {
        const double f = k / 4.0;
        const double px = x0 + f * (x1 - x0), py = y1 - f * (y1 - y0);
        svg << "<text x=\"" << fixed(px) << "\" y=\"" << y1 + 18 << "\" text-anchor=\"middle\">"
            << fixed(ax.lo + f * (ax.hi - ax.lo)) << "</text>\n"
            << "<text x=\"" << x0 - 8 << "\" y=\"" << fixed(py + 4) << "\" text-anchor=\"end\">"
            << fixed(ay.lo + f * (ay.hi - ay.lo)) << "</text>\n";
    }
    svg << "<text x=\"" << kSize / 2 << "\" y=\"" << kSize - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << xlabel << "</text>\n"
        << "<text x=\"18\" y=\"" << kSize / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << kSize / 2 << ")\">" << ylabel << "</text>\n</g>\n";

    svg << "<g stroke=\"none\">\n";
    for (std::size_t i = 0; i < n; ++i) {
        svg << "<circle cx=\"" << fixed(ax.to_px(u[i], false)) << "\" cy=\"" << fixed(ay.to_px(v[i], true))
            << "\" r=\"3\" fill=\"" << angle_color(hue[i]) << "\" data-u=\"" << format_double(u[i])
            << "\" data-v=\"" << format_double(v[i]) << "\"/>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace swarm
