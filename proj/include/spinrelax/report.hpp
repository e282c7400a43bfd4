#pragma once

// Text outputs of the command-line tool: the rates summary, the evolution
// CSV and the two-panel SVG figure. Numbers are written with std::to_chars,
// so output is locale independent and round-trips exactly.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "spinrelax/evolution.hpp"
#include "spinrelax/spectral.hpp"
#include "spinrelax/units.hpp"

namespace spinrelax::report {

/// Shortest decimal that parses back to the same double.
inline std::string shortest(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

/// Fixed significant digits in scientific form, for display.
inline std::string sig(double x, int digits = 6) {
    if (!std::isfinite(x)) return shortest(x);
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, digits - 1);
    return std::string(buf, ptr);
}

struct Rates {
    double omega0_mev = 0.0;
    double omega0_mhz = 0.0;
    double gamma = 0.0;
    double rate_w = 0.0;
    double relaxation_s = 0.0;  // 1/W, infinite when W = 0
    double shift_full_line = 0.0;
    double shift_half_line = 0.0;
    double b = 0.0;
    std::string warning;
};

inline Rates compute_rates(const CouplingParams& c) {
    Rates r;
    r.omega0_mev = c.line.omega0;
    r.omega0_mhz = mev_to_megahertz(c.line.omega0);
    r.gamma = decay_width(c);
    r.rate_w = transition_rate(c, c.line.omega0);
    r.relaxation_s = r.rate_w > 0.0 ? mev_inverse_to_seconds(1.0 / r.rate_w) : std::numeric_limits<double>::infinity();
    r.shift_full_line = energy_shift_pv(c, LowerLimit::minus_infinity);
    r.shift_half_line = energy_shift_pv(c, LowerLimit::zero);
    r.b = c.line.b();
    if (auto w = c.weak_field_warning()) r.warning = *w;
    return r;
}

inline void write_rates(std::ostream& os, const Rates& r) {
    os << "omega0            = " << sig(r.omega0_mev) << " MeV (" << sig(r.omega0_mhz) << " MHz)\n";
    os << "gamma             = " << sig(r.gamma) << " MeV\n";
    os << "W = 2 gamma       = " << sig(r.rate_w) << " MeV\n";
    os << "relaxation 1/W    = " << sig(r.relaxation_s) << " s\n";
    os << "PV shift (-inf)   = " << sig(r.shift_full_line) << " MeV\n";
    os << "PV shift (0)      = " << sig(r.shift_half_line) << " MeV\n";
    os << "b = (omega0/delta)^2 = " << sig(r.b) << " (dimensionless)\n";
    if (!r.warning.empty()) os << "warning: " << r.warning << "\n";
}

inline constexpr const char* csv_header = "t_seconds,t_inverse_mev,markovian,non_markovian,total";

inline void write_csv(std::ostream& os, std::span<const EvolutionPoint> pts) {
    os << csv_header << '\n';
    for (const auto& p : pts)
        os << shortest(mev_inverse_to_seconds(p.t)) << ',' << shortest(p.t) << ',' << shortest(p.markovian) << ','
           << shortest(p.non_markovian) << ',' << shortest(p.total) << '\n';
}

/// Sampling for the oscillation panel: the first `periods` Larmor periods at
/// `per_period` points each, fine enough to resolve the oscillation at omega0.
inline std::vector<double> oscillation_window(const EvolutionParams& p, int periods = 40, int per_period = 32) {
    const double period = 2.0 * std::numbers::pi / p.omega0;
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(periods * per_period) + 1);
    for (int i = 0; i <= periods * per_period; ++i) g.push_back(period * i / per_period);
    return g;
}

struct Series {
    std::vector<double> x;  // seconds
    std::vector<double> y;
};

namespace detail {

struct Panel {
    double left, top, width, height;
};

inline void axis_range(const std::vector<double>& v, double& lo, double& hi) {
    lo = *std::min_element(v.begin(), v.end());
    hi = *std::max_element(v.begin(), v.end());
    if (hi == lo) {
        const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
        lo -= pad;
        hi += pad;
    }
}

inline void draw_panel(std::ostream& os, const Panel& pn, const Series& s, const std::string& title,
                       const std::string& x_label, const std::string& y_label, const char* colour) {
    double x0, x1, y0, y1;
    axis_range(s.x, x0, x1);
    axis_range(s.y, y0, y1);
    auto px = [&](double x) { return pn.left + (x - x0) / (x1 - x0) * pn.width; };
    auto py = [&](double y) { return pn.top + pn.height - (y - y0) / (y1 - y0) * pn.height; };

    os << "<rect x=\"" << pn.left << "\" y=\"" << pn.top << "\" width=\"" << pn.width << "\" height=\"" << pn.height
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << pn.left + pn.width / 2 << "\" y=\"" << pn.top - 10
       << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    os << "<text x=\"" << pn.left + pn.width / 2 << "\" y=\"" << pn.top + pn.height + 40
       << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
    os << "<text transform=\"translate(" << pn.left - 70 << "," << pn.top + pn.height / 2
       << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << y_label << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4.0;
        const double yv = y0 + (y1 - y0) * i / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << pn.top + pn.height + 18
           << "\" text-anchor=\"middle\" font-size=\"10\">" << sig(xv, 3) << "</text>\n";
        os << "<text x=\"" << pn.left - 6 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-size=\"10\">" << sig(yv, 3) << "</text>\n";
    }
    if (y0 < 0.0 && y1 > 0.0)
        os << "<line x1=\"" << pn.left << "\" y1=\"" << py(0.0) << "\" x2=\"" << pn.left + pn.width << "\" y2=\""
           << py(0.0) << "\" stroke=\"#bbbbbb\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) os << (i ? " " : "") << sig(px(s.x[i]), 6) << ',' << sig(py(s.y[i]), 6);
    os << "\"/>\n";
}

}  // namespace detail

/// Two stacked panels: the Markovian term over the run grid and the
/// non-Markovian term over its oscillation window.
inline void write_svg(std::ostream& os, const Series& markovian, const Series& non_markovian) {
    if (markovian.x.size() < 2 || non_markovian.x.size() < 2)
        throw std::invalid_argument("write_svg: each panel needs at least two points");
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"700\" viewBox=\"0 0 800 700\">\n";
    os << "<rect width=\"800\" height=\"700\" fill=\"white\"/>\n";
    detail::draw_panel(os, {100, 40, 660, 250}, markovian, "Markovian term exp(-2 gamma t)", "t [s]",
                       "population", "#1f4e9c");
    detail::draw_panel(os, {100, 390, 660, 250}, non_markovian, "Non-Markovian term", "t [s]", "population",
                       "#b3261e");
    os << "</svg>\n";
}

inline Series markovian_series(std::span<const EvolutionPoint> pts) {
    Series s;
    for (const auto& p : pts) {
        s.x.push_back(mev_inverse_to_seconds(p.t));
        s.y.push_back(p.markovian);
    }
    return s;
}

inline Series non_markovian_series(std::span<const EvolutionPoint> pts) {
    Series s;
    for (const auto& p : pts) {
        s.x.push_back(mev_inverse_to_seconds(p.t));
        s.y.push_back(p.non_markovian);
    }
    return s;
}

}  // namespace spinrelax::report
