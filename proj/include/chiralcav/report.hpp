// report.hpp - CSV / JSON / SVG serialization of sweeps, trajectories and solves.
//
// Sweep CSV header: one column per axis (named as given), followed by
//   re_a_out,im_a_out,i_out_rad_per_us,i_out_over_2pi_mhz,p_e_left,p_e_right,
//   converged,newton_iters,residual_norm
// Trajectory CSV header:
//   t_us,re_a,im_a, then for L and R: re_s12,im_s12,re_s13,im_s13,re_s23,im_s23,s11,s22
// Floats carry 17 significant digits.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynamics.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "params_io.hpp"
#include "steady_solver.hpp"
#include "sweep.hpp"

namespace chiralcav {

inline constexpr std::array<const char*, 9> sweep_result_columns{
    "re_a_out", "im_a_out", "i_out_rad_per_us", "i_out_over_2pi_mhz", "p_e_left",
    "p_e_right", "converged", "newton_iters", "residual_norm"};

inline void write_sweep_csv(const SweepTable& t, std::ostream& out) {
    for (const auto& a : t.axes) out << a.parameter << ',';
    for (std::size_t k = 0; k < sweep_result_columns.size(); ++k) out << (k ? "," : "") << sweep_result_columns[k];
    out << '\n';
    for (const auto& r : t.rows) {
        for (double v : r.axis_values) out << format_double(v) << ',';
        out << format_double(r.obs.a_out.real()) << ',' << format_double(r.obs.a_out.imag()) << ','
            << format_double(r.obs.i_out) << ',' << format_double(r.obs.i_out_over_2pi_mhz) << ','
            << format_double(r.obs.p_e_left) << ',' << format_double(r.obs.p_e_right) << ','
            << (r.solve.converged ? 1 : 0) << ',' << r.solve.newton_iters << ','
            << format_double(r.solve.residual_norm) << '\n';
    }
}

namespace detail {

inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace detail

inline nlohmann::json params_to_json(const ModelParams& p) {
    nlohmann::json j;
    for (const auto& f : frequency_fields) j[std::string(f.name) + "_mhz"] = (p.*f.member).to_mhz();
    j["n_left"] = p.n_left;
    j["n_right"] = p.n_right;
    j["phi_rad"] = p.phi;
    return j;
}

inline nlohmann::json observables_to_json(const Observables& o) {
    return {{"re_a_out", o.a_out.real()},
            {"im_a_out", o.a_out.imag()},
            {"i_out_rad_per_us", o.i_out},
            {"i_out_over_2pi_mhz", o.i_out_over_2pi_mhz},
            {"p_e_left", o.p_e_left},
            {"p_e_right", o.p_e_right}};
}

inline nlohmann::json state_to_json(const MeanFieldState& s) {
    const auto species = [](const SpeciesMoments& m) {
        return nlohmann::json{{"re_s12", m.s12.real()}, {"im_s12", m.s12.imag()}, {"re_s13", m.s13.real()},
                              {"im_s13", m.s13.imag()}, {"re_s23", m.s23.real()}, {"im_s23", m.s23.imag()},
                              {"s11", m.s11},           {"s22", m.s22},           {"s33", m.s33}};
    };
    return {{"re_a", s.a.real()}, {"im_a", s.a.imag()}, {"left", species(s.left)}, {"right", species(s.right)}};
}

inline nlohmann::json sweep_to_json(const SweepTable& t) {
    nlohmann::json j;
    j["method"] = to_string(t.method);
    j["axes"] = nlohmann::json::array();
    for (const auto& a : t.axes)
        j["axes"].push_back({{"parameter", a.parameter}, {"start", a.start}, {"stop", a.stop}, {"points", a.points}});
    j["rows"] = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json row = observables_to_json(r.obs);
        for (std::size_t d = 0; d < t.axes.size(); ++d) row[t.axes[d].parameter] = r.axis_values[d];
        row["converged"] = r.solve.converged;
        row["newton_iters"] = r.solve.newton_iters;
        row["residual_norm"] = detail::number_or_null(r.solve.residual_norm);
        j["rows"].push_back(std::move(row));
    }
    return j;
}

inline void write_trajectory_csv(const Trajectory& tr, std::ostream& out) {
    out << "t_us,re_a,im_a";
    for (const char* q : {"L", "R"})
        for (const char* c : {"re_s12", "im_s12", "re_s13", "im_s13", "re_s23", "im_s23", "s11", "s22"})
            out << ',' << c << '_' << q;
    out << '\n';
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const MeanFieldState& s = tr.states[k];
        out << format_double(tr.times[k]) << ',' << format_double(s.a.real()) << ',' << format_double(s.a.imag());
        for (const SpeciesMoments* m : {&s.left, &s.right}) {
            for (double v : {m->s12.real(), m->s12.imag(), m->s13.real(), m->s13.imag(), m->s23.real(),
                             m->s23.imag(), m->s11, m->s22})
                out << ',' << format_double(v);
        }
        out << '\n';
    }
}

// SVG plots ---------------------------------------------------------------

inline std::string axis_label(const std::string& parameter) {
    static const std::map<std::string, std::string> labels{
        {"delta_a", "Δ_a/2π (MHz)"},     {"delta_31", "Δ₃₁/2π (MHz)"}, {"delta_32", "Δ₃₂/2π (MHz)"},
        {"g_a", "g_a/2π (MHz)"},         {"omega_31", "Ω₃₁/2π (MHz)"}, {"omega_32", "Ω₃₂/2π (MHz)"},
        {"kappa_a", "κ_a/2π (MHz)"},     {"gamma_21", "Γ₂₁/2π (MHz)"}, {"gamma_31", "Γ₃₁/2π (MHz)"},
        {"gamma_32", "Γ₃₂/2π (MHz)"},    {"n_left", "N_L"},            {"n_right", "N_R"},
        {"phi", "φ (rad)"},              {"eta", "η"}};
    const auto it = labels.find(canonical_parameter_name(parameter));
    return it == labels.end() ? parameter : it->second;
}

namespace detail {

struct PlotFrame {
    double width = 640, height = 420, left = 72, right = 24, top = 24, bottom = 56;
    double x0, x1, y0, y1;
    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

inline std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

inline void svg_axes(std::ostream& out, const PlotFrame& f, const std::string& xl, const std::string& yl) {
    const double xb = f.height - f.bottom, yb = f.left;
    out << "<rect x=\"" << f.left << "\" y=\"" << f.top << "\" width=\"" << f.width - f.left - f.right
        << "\" height=\"" << f.height - f.top - f.bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = f.x0 + (f.x1 - f.x0) * k / 4, yv = f.y0 + (f.y1 - f.y0) * k / 4;
        out << "<text x=\"" << f.px(xv) << "\" y=\"" << xb + 18 << "\" text-anchor=\"middle\" font-size=\"12\">"
            << fmt_tick(xv) << "</text>\n";
        out << "<text x=\"" << yb - 6 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"12\">"
            << fmt_tick(yv) << "</text>\n";
    }
    out << "<text x=\"" << (f.left + f.width - f.right) / 2 << "\" y=\"" << f.height - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">" << xl << "</text>\n";
    out << "<text transform=\"translate(18," << (f.top + f.height - f.bottom) / 2
        << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"14\">" << yl << "</text>\n";
}

/// Piecewise-linear ramp through a few viridis stops, u in [0, 1].
inline std::string heat_color(double u) {
    static constexpr double stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    u = std::clamp(std::isfinite(u) ? u : 0.0, 0.0, 1.0) * 4.0;
    const int k = std::min(3, static_cast<int>(u));
    const double t = u - k;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[k][0] + t * (stops[k + 1][0] - stops[k][0])),
                  static_cast<int>(stops[k][1] + t * (stops[k + 1][1] - stops[k][1])),
                  static_cast<int>(stops[k][2] + t * (stops[k + 1][2] - stops[k][2])));
    return buf;
}

}  // namespace detail

/// Line plot of I_out/2pi for one axis (or one line per second-axis value
/// when that axis has at most 8 points); heatmap otherwise.
inline void write_sweep_svg(const SweepTable& t, std::ostream& out) {
    detail::PlotFrame f;
    const AxisSpec& ax = t.axes[0];
    f.x0 = std::min(ax.start, ax.stop);
    f.x1 = std::max(ax.start, ax.stop);
    const int n0 = ax.points;
    const int n1 = t.axes.size() == 2 ? t.axes[1].points : 1;
    double i_max = 0.0;
    for (const auto& r : t.rows) i_max = std::max(i_max, r.obs.i_out_over_2pi_mhz);
    if (!(i_max > 0.0)) i_max = 1.0;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
        << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const std::string i_label = "I_out/2π (MHz)";
    if (n1 <= 8) {
        f.y0 = 0.0;
        f.y1 = i_max * 1.05;
        static constexpr const char* colors[8] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
        for (int j = 0; j < n1; ++j) {
            out << "<polyline fill=\"none\" stroke=\"" << colors[j] << "\" stroke-width=\"1.5\" points=\"";
            for (int i = 0; i < n0; ++i) {
                const SweepRow& r = t.rows[static_cast<std::size_t>(i) * n1 + j];
                out << f.px(r.axis_values[0]) << ',' << f.py(r.obs.i_out_over_2pi_mhz) << ' ';
            }
            out << "\"/>\n";
            if (n1 > 1)
                out << "<text x=\"" << f.width - f.right - 8 << "\" y=\"" << f.top + 16 + 16 * j
                    << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[j] << "\">"
                    << axis_label(t.axes[1].parameter) << " = " << detail::fmt_tick(t.axes[1].value(j)) << "</text>\n";
        }
        detail::svg_axes(out, f, axis_label(ax.parameter), i_label);
    } else {
        const AxisSpec& ay = t.axes[1];
        f.y0 = std::min(ay.start, ay.stop);
        f.y1 = std::max(ay.start, ay.stop);
        f.right = 96;
        const double cw = (f.width - f.left - f.right) / n0, ch = (f.height - f.top - f.bottom) / n1;
        for (const auto& r : t.rows) {
            const int i = ax.stop > ax.start ? r.index[0] : n0 - 1 - r.index[0];
            const int j = ay.stop > ay.start ? r.index[1] : n1 - 1 - r.index[1];
            out << "<rect x=\"" << f.left + i * cw << "\" y=\"" << f.height - f.bottom - (j + 1) * ch
                << "\" width=\"" << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\""
                << detail::heat_color(r.obs.i_out_over_2pi_mhz / i_max) << "\"/>\n";
        }
        // colour bar
        const double bx = f.width - f.right + 16, bh = f.height - f.top - f.bottom;
        for (int k = 0; k < 32; ++k)
            out << "<rect x=\"" << bx << "\" y=\"" << f.top + bh * (31 - k) / 32 << "\" width=\"14\" height=\""
                << bh / 32 + 0.5 << "\" fill=\"" << detail::heat_color((k + 0.5) / 32) << "\"/>\n";
        out << "<text x=\"" << bx + 18 << "\" y=\"" << f.top + 10 << "\" font-size=\"11\">" << detail::fmt_tick(i_max)
            << "</text>\n<text x=\"" << bx + 18 << "\" y=\"" << f.top + bh << "\" font-size=\"11\">0</text>\n";
        out << "<text x=\"" << bx << "\" y=\"" << f.top - 8 << "\" font-size=\"11\">" << i_label << "</text>\n";
        detail::svg_axes(out, f, axis_label(ax.parameter), axis_label(ay.parameter));
    }
    out << "</svg>\n";
}

}  // namespace chiralcav
