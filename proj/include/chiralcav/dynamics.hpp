// dynamics.hpp - time evolution of the mean-field equations of motion.
//
// The Langevin noise operators have zero mean and drop out of the mean-field
// equations. Integration from the vacuum gives a route to the steady state
// that is independent of the Newton solver and is used to check it.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "detail/layout.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace chiralcav {

struct Trajectory {
    std::vector<double> times;  // us
    std::vector<MeanFieldState> states;
    std::optional<double> converged_at;  // start of the settled window, us
};

struct DynamicsOptions {
    double rtol = 1e-10;
    double atol = 1e-13;            // on normalized variables
    double sample_interval = 1e-2;  // us; 0 records every accepted step
    double initial_step = 1e-4;     // us
    double min_step = 1e-12;        // us; smaller steps raise StiffnessFailure
};

class StiffnessFailure : public Error {
public:
    StiffnessFailure(double time, MeanFieldState state, const std::string& what)
        : Error("StiffnessFailure", what), time_(time), state_(std::move(state)) {}
    double time() const noexcept { return time_; }
    const MeanFieldState& state() const noexcept { return state_; }

private:
    double time_;
    MeanFieldState state_;
};

/// Mean-field time derivatives. The returned state holds d/dt of every field;
/// ds33/dt is fixed by population conservation.
inline MeanFieldState mean_field_rhs(const MeanFieldState& s, const ModelParams& p) {
    constexpr cd i{0.0, 1.0};
    const double d_a = p.delta_a.value(), d31 = p.delta_31.value(), d32 = p.delta_32.value();
    const double g = p.g_a.value(), o31 = p.omega_31.value(), o32 = p.omega_32.value();
    const double kappa = p.kappa_a.value();
    const double g21 = p.gamma_21.value(), g31 = p.gamma_31.value(), g32 = p.gamma_32.value();

    MeanFieldState ds;
    const cd a = s.a;
    const cd a_dag = std::conj(a);
    ds.a = -i * d_a * a - i * g * (s.left.s12 + s.right.s12) - kappa * a;

    for (Chirality q : {Chirality::left, Chirality::right}) {
        const SpeciesMoments& m = s.species(q);
        SpeciesMoments& dm = ds.species(q);
        const cd ep = std::exp(cd{0.0, p.phase(q)});
        const cd em = std::conj(ep);
        const cd s21 = std::conj(m.s12), s31 = std::conj(m.s13), s32 = std::conj(m.s23);

        dm.s12 = i * ((d32 - d31) * m.s12 + g * a * (m.s22 - m.s11) + o31 * s32 - o32 * em * m.s13) - g21 * m.s12;
        dm.s13 = i * (-d31 * m.s13 + o31 * (m.s33 - m.s11) + g * a * m.s23 - o32 * ep * m.s12) - (g31 + g32) * m.s13;
        dm.s23 = i * (-d32 * m.s23 + o32 * ep * (m.s33 - m.s22) - o31 * s21 + g * a_dag * m.s13) -
                 (g21 + g31 + g32) * m.s23;
        dm.s11 = (i * (g * (a * s21 - a_dag * m.s12) + o31 * (s31 - m.s13))).real() + 2.0 * g21 * m.s22 +
                 2.0 * g31 * m.s33;
        dm.s22 = (i * (g * (a_dag * m.s12 - a * s21) + o32 * (ep * s32 - em * m.s23))).real() - 2.0 * g21 * m.s22 +
                 2.0 * g32 * m.s33;
        dm.s33 = -dm.s11 - dm.s22;
    }
    return ds;
}

/// Integrates from init with an adaptive Runge-Kutta-Fehlberg 7(8) scheme in
/// normalized variables. Settled when |d/dt x|_inf / max(|x|_inf, 1) stays
/// below settle_tol for 10 / kappa_a; converged_at is the start of that window
/// and the last sample is the state at its end. Without settling the full
/// trajectory up to t_max is returned with converged_at empty.
inline Trajectory integrate_to_steady(const ModelParams& params, const MeanFieldState& init, double t_max,
                                      double settle_tol, const DynamicsOptions& opts = {}) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, detail::n_unknowns>;

    validate(params);
    if (!(t_max > 0.0)) throw ConfigError("t_max must be > 0");
    if (!(settle_tol > 0.0)) throw ConfigError("settle_tol must be > 0");

    const double n = params.total();
    const auto to_array = [](const detail::Vec18& v) {
        State a;
        std::copy(v.data(), v.data() + detail::n_unknowns, a.begin());
        return a;
    };
    const auto to_vec = [](const State& a) {
        detail::Vec18 v;
        std::copy(a.begin(), a.end(), v.data());
        return v;
    };
    const auto system = [&](const State& x, State& dxdt, double /*t*/) {
        const MeanFieldState s = detail::unpack(to_vec(x), params);
        dxdt = to_array(detail::pack(mean_field_rhs(s, params), n));
    };
    const auto settle_metric = [&](const State& x) {
        State dxdt;
        system(x, dxdt, 0.0);
        double num = 0.0, den = 1.0;
        for (int k = 0; k < detail::n_unknowns; ++k) {
            num = std::max(num, std::abs(dxdt[k]));
            den = std::max(den, std::abs(x[k]));
        }
        return num / den;
    };

    Trajectory traj;
    State x = to_array(detail::pack(init, n));
    double t = 0.0;
    double dt = opts.initial_step;
    const double window = 10.0 / params.kappa_a.value();
    std::optional<double> window_start;
    double next_sample = 0.0;

    const auto record = [&] {
        traj.times.push_back(t);
        traj.states.push_back(detail::unpack(to_vec(x), params));
        next_sample = t + opts.sample_interval;
    };
    record();
    if (settle_metric(x) < settle_tol) window_start = 0.0;

    auto stepper = odeint::make_controlled(opts.atol, opts.rtol, odeint::runge_kutta_fehlberg78<State>());
    while (t < t_max) {
        if (window_start && t - *window_start >= window) {
            traj.converged_at = window_start;
            break;
        }
        dt = std::min(dt, t_max - t);
        if (window_start) dt = std::min(dt, std::max(*window_start + window - t, opts.min_step));
        const double t_before = t;
        if (stepper.try_step(system, x, t, dt) == odeint::fail) {
            if (dt < opts.min_step) {
                std::ostringstream msg;
                msg << "step size underflow at t = " << t << " us";
                throw StiffnessFailure(t, detail::unpack(to_vec(x), params), msg.str());
            }
            continue;
        }
        if (t <= t_before) {
            throw StiffnessFailure(t, detail::unpack(to_vec(x), params), "time did not advance");
        }
        if (settle_metric(x) < settle_tol) {
            if (!window_start) window_start = t;
        } else {
            window_start.reset();
        }
        if (t >= next_sample) record();
    }
    if (!traj.converged_at && window_start && t - *window_start >= window) traj.converged_at = window_start;
    if (traj.times.back() != t) record();
    return traj;
}

}  // namespace chiralcav
