// chiralcav - command-line front end.

#include <string>
#include <vector>

#include <CLI11.hpp>

#include <chiralcav/cli.hpp>

namespace {

void add_common(CLI::App* sub, chiralcav::RunConfig& cfg, std::string& format, std::string& method,
                bool with_method) {
    sub->add_option("--params", cfg.params_file, "parameter file (key = value)");
    sub->add_option("--out", cfg.output_path, "output file");
    sub->add_option("--format", format, "csv|json|svg")->check(CLI::IsMember({"csv", "json", "svg"}));
    sub->add_option("--threads", cfg.threads, "worker threads (0 = machine parallelism)");
    sub->add_flag("--tie-detunings", cfg.tie_detunings, "set delta_31 = 0 and delta_a = -delta_32 at every point");
    if (with_method) sub->add_option("--method", method, "analytic|full")->check(CLI::IsMember({"analytic", "full"}));
    sub->add_option("--tol", cfg.solve.tol_abs, "Newton residual tolerance (rad/us, normalized)");
    sub->add_option("--max-newton-iters", cfg.solve.max_newton_iters, "Newton iterations per continuation step");
    sub->add_option("--continuation-steps", cfg.solve.continuation_steps, "geometric Omega_31 ramp length");
}

}  // namespace

int main(int argc, char** argv) {
    using chiralcav::Command;
    chiralcav::RunConfig cfg;
    std::string format;
    std::string method = "full";
    std::vector<std::string> axes;

    CLI::App app{"Mean-field steady states and enantiomeric-excess detection for chiral molecules in a cavity"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "steady state at one parameter point");
    add_common(solve, cfg, format, method, true);

    auto* sweep = app.add_subcommand("sweep", "1-D or 2-D parameter grid");
    add_common(sweep, cfg, format, method, true);
    sweep->add_option("--axis", axes, "name:start:stop:points (repeatable, max 2)")->expected(1, 2);

    auto* dyn = app.add_subcommand("dynamics", "integrate the equations of motion from the vacuum");
    add_common(dyn, cfg, format, method, false);
    dyn->add_option("--t-max", cfg.t_max_us, "integration horizon, us");
    dyn->add_option("--settle-tol", cfg.settle_tol, "settling threshold on the normalized RHS");
    dyn->add_option("--sample-interval", cfg.sample_interval_us, "trajectory sampling, us (0 = every step)");

    auto* inv = app.add_subcommand("invert", "enantiomeric excess from a measured intensity");
    add_common(inv, cfg, format, method, true);
    double intensity = 0.0;
    inv->add_option("--intensity", intensity, "measured I_out/2pi, MHz")->required();
    inv->add_option("--grid-points", cfg.grid_points, "calibration grid size (full method)");

    auto* mol = app.add_subcommand("molecule", "working transition frequencies of a molecule preset");
    mol->add_option("--preset", cfg.preset, "molecule preset");
    mol->add_option("--out", cfg.output_path, "JSON output file");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) cfg.command = Command::solve;
    if (sweep->parsed()) cfg.command = Command::sweep;
    if (dyn->parsed()) cfg.command = Command::dynamics;
    if (inv->parsed()) {
        cfg.command = Command::invert;
        cfg.intensity_mhz = intensity;
    }
    if (mol->parsed()) cfg.command = Command::molecule;
    cfg.method = method == "analytic" ? chiralcav::SweepMethod::analytic : chiralcav::SweepMethod::full_solver;

    try {
        if (!format.empty()) cfg.output_format = chiralcav::parse_format(format);
        for (const auto& a : axes) cfg.axes.push_back(chiralcav::parse_axis(a));
    } catch (const chiralcav::Error& e) {
        std::cerr << nlohmann::json{{"error", e.kind()}, {"message", e.what()}, {"command", to_string(cfg.command)}}
                         .dump()
                  << '\n';
        return 2;
    }
    return chiralcav::run(cfg);
}
