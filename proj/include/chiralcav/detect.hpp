// detect.hpp - enantiomeric excess from a measured output intensity.
//
// Two inversions: the first-order intensity law (even in eta, so the sign is
// never resolved), and a calibration curve built from full steady-state solves
// on a uniform eta grid, inverted by piecewise-linear interpolation.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "analytic.hpp"
#include "detail/parallel.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "steady_solver.hpp"

namespace chiralcav {

enum class EtaMethod { analytic_low_excitation, calibrated_full };

inline const char* to_string(EtaMethod m) {
    return m == EtaMethod::analytic_low_excitation ? "analytic_low_excitation" : "calibrated_full";
}

struct EtaEstimate {
    double magnitude = 0.0;
    bool sign_resolved = false;
    std::vector<double> candidates;
    EtaMethod method = EtaMethod::analytic_low_excitation;
};

class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& what) : Error("OutOfRange", what) {}
};

class DegenerateConfig : public Error {
public:
    explicit DegenerateConfig(const std::string& what) : Error("DegenerateConfig", what) {}
};

class NoCrossing : public Error {
public:
    explicit NoCrossing(const std::string& what) : Error("NoCrossing", what) {}
};

inline constexpr double eta_range_slack = 1e-6;

/// i_out_measured in rad/us.
inline EtaEstimate eta_from_intensity_low(double i_out_measured, const ModelParams& params) {
    if (!(i_out_measured >= 0.0)) throw OutOfRange("measured intensity must be >= 0");
    const double i_pure = output_intensity_low_excitation(with_eta(params, 1.0));
    if (!(i_pure > 0.0)) throw DegenerateConfig("configuration produces no output at |eta| = 1");
    double mag = std::sqrt(i_out_measured / i_pure);
    if (mag > 1.0 + eta_range_slack) throw OutOfRange("measured intensity exceeds the |eta| = 1 prediction");
    mag = std::min(mag, 1.0);

    EtaEstimate est;
    est.method = EtaMethod::analytic_low_excitation;
    est.magnitude = mag;
    est.sign_resolved = false;
    est.candidates = mag == 0.0 ? std::vector<double>{0.0} : std::vector<double>{mag, -mag};
    return est;
}

struct CalibrationCurve {
    std::vector<double> eta;
    std::vector<double> intensity;  // rad/us
};

/// Full-solver intensity on a uniform eta grid over [-1, 1] at fixed N.
inline CalibrationCurve calibrate_full(const ModelParams& params, int grid_points, const SolveOptions& opts = {},
                                       unsigned threads = 1) {
    if (grid_points < 3) throw ConfigError("grid_points must be >= 3");
    CalibrationCurve c;
    c.eta.resize(grid_points);
    c.intensity.resize(grid_points);
    for (int k = 0; k < grid_points; ++k) c.eta[k] = -1.0 + 2.0 * k / (grid_points - 1);
    detail::parallel_for(static_cast<std::size_t>(grid_points), threads, [&](std::size_t k) {
        const ModelParams p = with_eta(params, c.eta[k]);
        c.intensity[k] = output_intensity(solve_steady(p, opts).state, p);
    });
    return c;
}

/// Every eta at which the interpolated curve equals i_out_measured.
inline EtaEstimate eta_from_curve(double i_out_measured, const CalibrationCurve& curve) {
    if (curve.eta.size() < 2 || curve.eta.size() != curve.intensity.size())
        throw ConfigError("calibration curve needs >= 2 matching points");
    if (!(i_out_measured >= 0.0)) throw OutOfRange("measured intensity must be >= 0");
    const auto [min_it, max_it] = std::minmax_element(curve.intensity.begin(), curve.intensity.end());
    const double i_max = *max_it;
    if (i_out_measured > i_max * (1.0 + eta_range_slack))
        throw NoCrossing("measured intensity exceeds the calibration maximum");
    const double target = std::min(i_out_measured, i_max);

    std::vector<double> found;
    const auto add = [&](double eta) {
        eta = std::clamp(eta, -1.0, 1.0);
        for (double e : found)
            if (std::abs(e - eta) < 1e-12) return;
        found.push_back(eta);
    };
    for (std::size_t k = 0; k + 1 < curve.eta.size(); ++k) {
        const double lo = curve.intensity[k], hi = curve.intensity[k + 1];
        if ((target - lo) * (target - hi) > 0.0) continue;
        if (lo == hi) {
            add(curve.eta[k]);
            add(curve.eta[k + 1]);
        } else {
            const double t = (target - lo) / (hi - lo);
            add(curve.eta[k] + t * (curve.eta[k + 1] - curve.eta[k]));
        }
    }
    // the same slack as at the global maximum applies to every local maximum,
    // so a measurement a hair above a peak still lands on it
    const std::size_t n = curve.eta.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double v = curve.intensity[k];
        const bool local_max = (k == 0 || v >= curve.intensity[k - 1]) && (k + 1 == n || v >= curve.intensity[k + 1]);
        if (local_max && target > v && target <= v * (1.0 + eta_range_slack)) add(curve.eta[k]);
    }
    if (found.empty()) {
        // below the curve minimum: report where the curve comes closest
        for (std::size_t k = 0; k < curve.eta.size(); ++k)
            if (curve.intensity[k] == *min_it) add(curve.eta[k]);
    }
    std::sort(found.begin(), found.end());

    EtaEstimate est;
    est.method = EtaMethod::calibrated_full;
    est.candidates = found;
    est.sign_resolved = found.size() == 1;
    for (double e : found) est.magnitude = std::max(est.magnitude, std::abs(e));
    return est;
}

inline EtaEstimate eta_from_intensity_full(double i_out_measured, const ModelParams& params, int grid_points,
                                           const SolveOptions& opts = {}, unsigned threads = 1) {
    return eta_from_curve(i_out_measured, calibrate_full(params, grid_points, opts, threads));
}

}  // namespace chiralcav
