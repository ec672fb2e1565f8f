// Shared fixtures for the test suites.

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <chiralcav/model.hpp>

namespace testing_support {

using namespace chiralcav;

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }
inline double rel_diff(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

/// Baseline with Omega_31 = 20 kHz: the strong-drive operating point.
inline ModelParams strong_drive() {
    ModelParams p = baseline_params();
    p.omega_31 = AngularFrequency::from_khz(20.0);
    return p;
}

/// Random physical parameters around the baseline, detunings untied.
inline ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ModelParams p;
    p.delta_a = AngularFrequency::from_mhz(-150.0 + 300.0 * u(rng));
    p.delta_31 = AngularFrequency::from_mhz(-2.0 + 4.0 * u(rng));
    p.delta_32 = AngularFrequency::from_mhz(-150.0 + 300.0 * u(rng));
    p.g_a = AngularFrequency::from_mhz(0.05 + 0.1 * u(rng));
    p.omega_31 = AngularFrequency::from_khz(1.0 + 30.0 * u(rng));
    p.omega_32 = AngularFrequency::from_mhz(0.1 + 1.0 * u(rng));
    p.kappa_a = AngularFrequency::from_mhz(0.5 + 1.0 * u(rng));
    p.gamma_21 = AngularFrequency::from_mhz(0.05 + 0.2 * u(rng));
    p.gamma_31 = AngularFrequency::from_mhz(0.05 + 0.2 * u(rng));
    p.gamma_32 = AngularFrequency::from_mhz(0.05 + 0.2 * u(rng));
    const double n = 1e5 + 2e6 * u(rng);
    const double eta = -1.0 + 2.0 * u(rng);
    p.n_left = 0.5 * n * (1.0 + eta);
    p.n_right = 0.5 * n * (1.0 - eta);
    p.phi = 2.0 * std::numbers::pi * u(rng);
    return p;
}

}  // namespace testing_support
