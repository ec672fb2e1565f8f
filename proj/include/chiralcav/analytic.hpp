// analytic.hpp - closed-form predictions of first-order perturbation theory in Omega_31.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "model.hpp"

namespace chiralcav {

/// Complex denominators of the first-order cavity amplitude.
struct KFactors {
    cd k_a;   // i delta_a + kappa_a
    cd k_21;  // i (delta_31 - delta_32) + gamma_21
    cd k_31;  // i delta_31 + gamma_31 + gamma_32
};

inline KFactors k_factors(const ModelParams& p) {
    constexpr cd i{0.0, 1.0};
    return {
        i * p.delta_a.value() + p.kappa_a.value(),
        i * (p.delta_31.value() - p.delta_32.value()) + p.gamma_21.value(),
        i * p.delta_31.value() + p.gamma_31.value() + p.gamma_32.value(),
    };
}

inline constexpr double degenerate_threshold = 1e-30;

namespace detail {

inline cd first_order_denominator(const ModelParams& p) {
    const KFactors k = k_factors(p);
    const double o32 = p.omega_32.value();
    const double g = p.g_a.value();
    const cd d = k.k_a * (k.k_21 * k.k_31 + o32 * o32) + g * g * p.total() * k.k_31;
    if (std::abs(d) < degenerate_threshold) throw DegenerateDenominator("first-order denominator vanishes");
    return d;
}

}  // namespace detail

/// Undriven fixed point: empty cavity, every molecule in |1>.
inline MeanFieldState zeroth_order_state(const ModelParams& p) {
    MeanFieldState s;
    s.left.s11 = p.n_left;
    s.right.s11 = p.n_right;
    return s;
}

/// <a> to first order in Omega_31.
inline cd first_order_cavity_amplitude(const ModelParams& p) {
    constexpr cd i{0.0, 1.0};
    const cd num = i * (p.n_left - p.n_right) * p.g_a.value() * p.omega_31.value() * p.omega_32.value() *
                   std::exp(cd{0.0, -p.phi});
    return num / detail::first_order_denominator(p);
}

/// First-order output intensity |sqrt(2 kappa) <a>|^2 in rad/us. Even in eta
/// and independent of phi.
inline double output_intensity_low_excitation(const ModelParams& p) {
    const double n = p.total();
    const cd num{n * std::sqrt(2.0 * p.kappa_a.value()) * p.g_a.value() * p.omega_31.value() *
                 p.omega_32.value() * p.eta()};
    return std::norm(num / detail::first_order_denominator(p));
}

/// Peak intensity at delta_32 = g sqrt(N) in the strong collective coupling
/// limit. Evaluated as its own formula, not by substitution into the
/// first-order intensity, so the two can be compared.
inline double optimal_output_intensity(const ModelParams& p) {
    const double g3 = p.gamma_31.value() + p.gamma_32.value();
    const double o31 = p.omega_31.value();
    const double o32 = p.omega_32.value();
    const double bracket = g3 * (p.gamma_21.value() + p.kappa_a.value()) + o32 * o32;
    if (std::abs(bracket) < degenerate_threshold) throw DegenerateDenominator("optimal-intensity bracket vanishes");
    const double eta = p.eta();
    return 2.0 * p.total() * p.kappa_a.value() * o31 * o31 * o32 * o32 * eta * eta / (bracket * bracket);
}

/// Omega_32 maximizing optimal_output_intensity:
/// x^2 / (c + x^2)^2 peaks at x^2 = c with c = (G31 + G32)(G21 + kappa).
inline AngularFrequency optimal_omega32(const ModelParams& p) {
    const double c = (p.gamma_31.value() + p.gamma_32.value()) * (p.gamma_21.value() + p.kappa_a.value());
    return AngularFrequency::rad_per_us(std::sqrt(std::max(c, 0.0)));
}

}  // namespace chiralcav
