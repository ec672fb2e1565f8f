// cli.hpp - command dispatch behind the chiralcav executable.
//
// Exit status: 0 on success, 1 when a full-solver run finished but some
// point did not converge (or dynamics did not settle), 2 on any error. Errors
// are reported as one JSON object on the error stream:
//   {"error": "<Kind>", "message": "...", "command": "<name>"}

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "analytic.hpp"
#include "detect.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "molecule.hpp"
#include "observables.hpp"
#include "params_io.hpp"
#include "report.hpp"
#include "steady_solver.hpp"
#include "sweep.hpp"

namespace chiralcav {

enum class Command { solve, sweep, dynamics, invert, molecule };
enum class OutputFormat { csv, json, svg };

inline const char* to_string(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::sweep: return "sweep";
        case Command::dynamics: return "dynamics";
        case Command::invert: return "invert";
        case Command::molecule: return "molecule";
    }
    return "?";
}

struct RunConfig {
    Command command = Command::solve;
    std::string params_file;
    std::vector<AxisSpec> axes;
    std::string output_path;  // empty: nothing written (invert: JSON on stdout)
    std::optional<OutputFormat> output_format;  // default: from extension, else csv/json
    SweepMethod method = SweepMethod::full_solver;
    unsigned threads = 0;  // 0 = machine parallelism
    bool tie_detunings = false;
    SolveOptions solve;

    // invert
    std::optional<double> intensity_mhz;  // measured I_out/2pi
    int grid_points = 201;

    // dynamics
    double t_max_us = 200.0;
    double settle_tol = 1e-7;
    double sample_interval_us = 1e-2;

    // molecule
    std::string preset = "propanediol-1,2";
};

/// "name:start:stop:points"
inline AxisSpec parse_axis(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw ConfigError("axis '" + text + "' must look like name:start:stop:points");
    AxisSpec a;
    a.parameter = parts[0];
    a.start = detail::parse_number(parts[1], "axis start");
    a.stop = detail::parse_number(parts[2], "axis stop");
    const double pts = detail::parse_number(parts[3], "axis points");
    if (pts != std::floor(pts) || pts < 0 || pts > 1e8) throw ConfigError("axis points must be a whole number");
    a.points = static_cast<int>(pts);
    return a;
}

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "svg") return OutputFormat::svg;
    throw ConfigError("unknown output format '" + s + "'");
}

namespace detail {

inline OutputFormat resolve_format(const RunConfig& c, OutputFormat fallback) {
    if (c.output_format) return *c.output_format;
    const std::string& p = c.output_path;
    if (p.ends_with(".json")) return OutputFormat::json;
    if (p.ends_with(".svg")) return OutputFormat::svg;
    if (p.ends_with(".csv")) return OutputFormat::csv;
    return fallback;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << content;
    if (!f) throw ConfigError("write to '" + path + "' failed");
}

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline void check_config(const RunConfig& c) {
    if (c.output_format == OutputFormat::svg && c.command != Command::sweep)
        throw ConfigError("svg output is only available for sweep");
    if (c.command == Command::sweep && c.axes.empty()) throw ConfigError("sweep requires at least one --axis");
    if (c.command != Command::sweep && !c.axes.empty()) throw ConfigError("--axis is only valid for sweep");
    if (c.command != Command::molecule && c.params_file.empty()) throw ConfigError("--params is required");
    if (c.command == Command::invert && !c.intensity_mhz) throw ConfigError("invert requires --intensity");
}

inline ModelParams load_run_params(const RunConfig& c) {
    ModelParams p = load_params(c.params_file);
    return c.tie_detunings ? link_detunings(p) : p;
}

inline int run_solve(const RunConfig& c, std::ostream& out) {
    const ModelParams p = load_run_params(c);
    MeanFieldState state;
    SolveReport rep;
    std::string summary;
    if (c.method == SweepMethod::analytic) {
        state = zeroth_order_state(p);
        state.a = first_order_cavity_amplitude(p);
        rep.state = state;
        rep.converged = true;
    } else {
        rep = solve_steady(p, c.solve);
        state = rep.state;
    }
    const Observables obs = observe(state, p);
    summary = "I_out/2π = " + fixed(obs.i_out_over_2pi_mhz, 2) + " MHz";
    if (c.method == SweepMethod::analytic)
        summary += " (first order)";
    else
        summary += ", converged in " + std::to_string(rep.newton_iters_total) + " Newton steps";

    if (!c.output_path.empty()) {
        const OutputFormat fmt = resolve_format(c, OutputFormat::json);
        std::ostringstream body;
        if (fmt == OutputFormat::json) {
            nlohmann::json j{{"method", to_string(c.method)},
                             {"params", params_to_json(p)},
                             {"observables", observables_to_json(obs)},
                             {"state", state_to_json(state)},
                             {"converged", rep.converged},
                             {"newton_iters", rep.newton_iters_total},
                             {"continuation_steps", rep.continuation_path_length},
                             {"residual_norm", rep.residual_norm}};
            body << j.dump(2) << '\n';
        } else {
            SweepRow row{{}, {}, obs, {rep.converged, rep.newton_iters_total, rep.residual_norm}};
            SweepTable t;
            t.rows.push_back(row);
            write_sweep_csv(t, body);
        }
        write_file(c.output_path, body.str());
    }
    out << summary << '\n';
    return 0;
}

inline int run_sweep_cmd(const RunConfig& c, std::ostream& out) {
    const ModelParams base = load_params(c.params_file);
    SweepOptions so;
    so.tie_detunings = c.tie_detunings;
    so.solve = c.solve;
    so.threads = c.threads;
    const SweepTable t = run_sweep(base, c.axes, c.method, so);

    if (!c.output_path.empty()) {
        std::ostringstream body;
        switch (resolve_format(c, OutputFormat::csv)) {
            case OutputFormat::csv: write_sweep_csv(t, body); break;
            case OutputFormat::json: body << sweep_to_json(t).dump(2) << '\n'; break;
            case OutputFormat::svg: write_sweep_svg(t, body); break;
        }
        write_file(c.output_path, body.str());
    }
    double i_max = 0.0;
    for (const auto& r : t.rows) i_max = std::max(i_max, r.obs.i_out_over_2pi_mhz);
    const std::size_t failed = t.failed_rows();
    out << t.rows.size() << " points (" << to_string(t.method) << "), " << failed
        << " not converged, max I_out/2π = " << fixed(i_max, 2) << " MHz\n";
    return failed == 0 ? 0 : 1;
}

inline int run_dynamics(const RunConfig& c, std::ostream& out) {
    const ModelParams p = load_run_params(c);
    DynamicsOptions opts;
    opts.sample_interval = c.sample_interval_us;
    const Trajectory tr = integrate_to_steady(p, zeroth_order_state(p), c.t_max_us, c.settle_tol, opts);
    if (!c.output_path.empty()) {
        if (resolve_format(c, OutputFormat::csv) != OutputFormat::csv)
            throw ConfigError("dynamics output is CSV only");
        std::ostringstream body;
        write_trajectory_csv(tr, body);
        write_file(c.output_path, body.str());
    }
    const double i_mhz = output_intensity(tr.states.back(), p) / two_pi;
    if (tr.converged_at) {
        out << "settled at t = " << fixed(*tr.converged_at, 3) << " us, I_out/2π = " << fixed(i_mhz, 2) << " MHz\n";
        return 0;
    }
    out << "not settled by t = " << fixed(tr.times.back(), 3) << " us, I_out/2π = " << fixed(i_mhz, 2) << " MHz\n";
    return 1;
}

inline int run_invert(const RunConfig& c, std::ostream& out) {
    const ModelParams p = load_run_params(c);
    const double i_meas = *c.intensity_mhz * two_pi;
    const EtaEstimate est = c.method == SweepMethod::analytic
                                ? eta_from_intensity_low(i_meas, p)
                                : eta_from_intensity_full(i_meas, p, c.grid_points, c.solve, c.threads);
    const nlohmann::json j{{"method", to_string(est.method)},
                           {"intensity_over_2pi_mhz", *c.intensity_mhz},
                           {"magnitude", est.magnitude},
                           {"sign_resolved", est.sign_resolved},
                           {"candidates", est.candidates}};
    if (c.output_path.empty()) {
        out << j.dump() << '\n';
    } else {
        write_file(c.output_path, j.dump(2) + "\n");
        out << est.candidates.size() << " candidate(s), |eta| = " << fixed(est.magnitude, 6)
            << (est.sign_resolved ? ", sign resolved\n" : ", sign not resolved\n");
    }
    return 0;
}

inline int run_molecule(const RunConfig& c, std::ostream& out) {
    const MoleculeSpec spec = molecule_preset(c.preset);
    const WorkingFrequencies w = working_frequencies(spec);
    const RotorLevels e = j1_rigid_rotor_energies(spec);
    if (!c.output_path.empty()) {
        const nlohmann::json j{{"preset", c.preset},
                               {"omega_21_over_2pi_mhz", w.omega_21.to_mhz()},
                               {"omega_31_over_2pi_mhz", w.omega_31.to_mhz()},
                               {"omega_32_over_2pi_mhz", w.omega_32.to_mhz()},
                               {"e_101_over_2pi_mhz", e.e_101.to_mhz()},
                               {"e_111_over_2pi_mhz", e.e_111.to_mhz()},
                               {"e_110_over_2pi_mhz", e.e_110.to_mhz()}};
        write_file(c.output_path, j.dump(2) + "\n");
    }
    out << "ω21/2π = " << fixed(w.omega_21.to_mhz() * 1e-6, 3) << " THz, ω31/2π = "
        << fixed(w.omega_31.to_mhz() * 1e-6, 3) << " THz, ω32/2π = " << fixed(w.omega_32.to_mhz(), 3) << " MHz\n";
    return 0;
}

}  // namespace detail

inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        detail::check_config(c);
        switch (c.command) {
            case Command::solve: return detail::run_solve(c, out);
            case Command::sweep: return detail::run_sweep_cmd(c, out);
            case Command::dynamics: return detail::run_dynamics(c, out);
            case Command::invert: return detail::run_invert(c, out);
            case Command::molecule: return detail::run_molecule(c, out);
        }
    } catch (const Error& e) {
        err << nlohmann::json{{"error", e.kind()}, {"message", e.what()}, {"command", to_string(c.command)}}.dump()
            << '\n';
    } catch (const std::exception& e) {
        err << nlohmann::json{{"error", "InternalError"}, {"message", e.what()}, {"command", to_string(c.command)}}
                   .dump()
            << '\n';
    }
    return 2;
}

}  // namespace chiralcav
