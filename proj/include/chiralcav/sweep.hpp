// sweep.hpp - one- and two-axis parameter grids.
//
// Rows come back in canonical order (row-major over the axes, first axis
// outermost) whatever the thread count. Full-solver sweeps walk the grid in
// serpentine order, cut into fixed-length chains; each chain starts with a
// cold continuation solve and warm-starts every later point from its
// predecessor. Chains are independent, so values do not depend on how many
// workers run them.

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "detail/parallel.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "params_io.hpp"
#include "steady_solver.hpp"

namespace chiralcav {

enum class SweepMethod { analytic, full_solver };

inline const char* to_string(SweepMethod m) { return m == SweepMethod::analytic ? "analytic" : "full_solver"; }

struct AxisSpec {
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    int points = 2;

    double value(int k) const { return start + (stop - start) * k / (points - 1); }
};

struct SolveSummary {
    bool converged = true;
    int newton_iters = 0;
    double residual_norm = 0.0;
};

struct SweepRow {
    std::vector<int> index;
    std::vector<double> axis_values;
    Observables obs;
    SolveSummary solve;
};

struct SweepTable {
    std::vector<AxisSpec> axes;
    std::vector<SweepRow> rows;
    SweepMethod method = SweepMethod::analytic;

    std::size_t failed_rows() const {
        std::size_t n = 0;
        for (const auto& r : rows) n += r.solve.converged ? 0 : 1;
        return n;
    }
};

struct SweepOptions {
    bool tie_detunings = false;  // link_detunings applied at every point
    SolveOptions solve;
    unsigned threads = 1;  // 0 = hardware concurrency
    int chain_length = 32;
};

class SweepAborted : public Error {
public:
    SweepAborted(SweepTable table, const std::string& what) : Error("SweepAborted", what), table_(std::move(table)) {}
    const SweepTable& table() const noexcept { return table_; }

private:
    SweepTable table_;
};

inline std::string canonical_parameter_name(std::string name) {
    if (name.ends_with("_mhz")) name.resize(name.size() - 4);
    if (name == "phi_rad") name = "phi";
    return name;
}

inline void validate_axes(std::span<const AxisSpec> axes) {
    if (axes.empty() || axes.size() > 2) throw ConfigError("a sweep takes 1 or 2 axes");
    for (const auto& a : axes) {
        if (!is_parameter_name(a.parameter)) throw ConfigError("unknown sweep parameter '" + a.parameter + "'");
        if (a.points < 2) throw ConfigError("axis '" + a.parameter + "' needs at least 2 points");
        if (!(std::isfinite(a.start) && std::isfinite(a.stop)) || a.start == a.stop)
            throw ConfigError("axis '" + a.parameter + "' has zero length");
    }
    if (axes.size() == 2 && canonical_parameter_name(axes[0].parameter) == canonical_parameter_name(axes[1].parameter))
        throw ConfigError("sweep axes must reference distinct parameters");
}

inline ModelParams point_params(const ModelParams& base, std::span<const AxisSpec> axes, const std::vector<int>& idx,
                                bool tie) {
    ModelParams p = base;
    for (std::size_t d = 0; d < axes.size(); ++d) p = set_parameter(p, axes[d].parameter, axes[d].value(idx[d]));
    return tie ? link_detunings(p) : p;
}

inline SweepTable run_sweep(const ModelParams& base, std::span<const AxisSpec> axes, SweepMethod method,
                            const SweepOptions& opts = {}) {
    validate_axes(axes);
    if (opts.chain_length < 1) throw ConfigError("chain_length must be >= 1");

    SweepTable table;
    table.axes.assign(axes.begin(), axes.end());
    table.method = method;
    const int n0 = axes[0].points;
    const int n1 = axes.size() == 2 ? axes[1].points : 1;
    const std::size_t total = static_cast<std::size_t>(n0) * n1;
    table.rows.resize(total);
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            SweepRow& row = table.rows[static_cast<std::size_t>(i) * n1 + j];
            row.index = axes.size() == 2 ? std::vector<int>{i, j} : std::vector<int>{i};
            for (std::size_t d = 0; d < axes.size(); ++d) row.axis_values.push_back(axes[d].value(row.index[d]));
        }
    }

    if (method == SweepMethod::analytic) {
        detail::parallel_for(total, opts.threads, [&](std::size_t k) {
            SweepRow& row = table.rows[k];
            const ModelParams p = validate(point_params(base, axes, row.index, opts.tie_detunings));
            MeanFieldState s = zeroth_order_state(p);
            s.a = first_order_cavity_amplitude(p);
            row.obs = observe(s, p);
        });
        return table;
    }

    // serpentine visiting order over canonical row ids
    std::vector<std::size_t> path;
    path.reserve(total);
    for (int i = 0; i < n0; ++i)
        for (int jj = 0; jj < n1; ++jj) path.push_back(static_cast<std::size_t>(i) * n1 + (i % 2 ? n1 - 1 - jj : jj));

    const std::size_t chain = static_cast<std::size_t>(opts.chain_length);
    const std::size_t n_chains = (total + chain - 1) / chain;
    detail::parallel_for(n_chains, opts.threads, [&](std::size_t c) {
        bool have_prev = false;
        MeanFieldState prev_state;
        ModelParams prev_params;
        for (std::size_t k = c * chain; k < std::min(total, (c + 1) * chain); ++k) {
            SweepRow& row = table.rows[path[k]];
            const ModelParams p = validate(point_params(base, axes, row.index, opts.tie_detunings));
            SolveReport rep;
            std::optional<SolveReport> warm;
            if (have_prev) warm = refine_steady(p, prev_state, prev_params, opts.solve);
            if (warm) {
                rep = *warm;
            } else {
                try {
                    rep = solve_steady(p, opts.solve);
                } catch (const NoConvergence& e) {
                    rep = e.report();
                } catch (const SingularJacobian&) {
                    rep = SolveReport{zeroth_order_state(p), std::numeric_limits<double>::infinity(), 0, 0, false};
                }
            }
            row.obs = observe(rep.state, p);
            row.solve = {rep.converged, rep.newton_iters_total, rep.residual_norm};
            have_prev = rep.converged;
            prev_state = rep.state;
            prev_params = p;
        }
    });

    const std::size_t failed = table.failed_rows();
    if (failed * 10 > total) {
        const std::string msg =
            std::to_string(failed) + " of " + std::to_string(total) + " sweep points did not converge";
        throw SweepAborted(std::move(table), msg);
    }
    return table;
}

}  // namespace chiralcav
