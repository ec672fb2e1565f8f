// model.hpp - parameters and mean-field state of the cavity + chiral-ensemble model.
//
// An ensemble of N_L left- and N_R right-handed cyclic three-level molecules
// couples collectively to one undriven cavity mode (|1>-|2> transition) and to
// two classical fields (|1>-|3>, |2>-|3>). The two enantiomers differ only in
// the loop phase: phi_L = phi, phi_R = phi + pi.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"
#include "units.hpp"

namespace chiralcav {

using cd = std::complex<double>;

enum class Chirality { left, right };

inline const char* to_string(Chirality q) { return q == Chirality::left ? "left" : "right"; }

struct ModelParams {
    AngularFrequency delta_a;   // omega_a + nu_32 - nu_31
    AngularFrequency delta_31;  // omega_31 - nu_31
    AngularFrequency delta_32;  // omega_32 - nu_32
    AngularFrequency g_a;       // single-molecule cavity coupling
    AngularFrequency omega_31;  // drive on |3>-|1>
    AngularFrequency omega_32;  // drive on |3>-|2>
    AngularFrequency kappa_a;   // cavity output decay
    AngularFrequency gamma_21;
    AngularFrequency gamma_31;
    AngularFrequency gamma_32;
    double n_left = 0.0;
    double n_right = 0.0;
    double phi = 0.0;  // rad; the right-handed phase phi + pi is never stored

    double total() const { return n_left + n_right; }
    double population(Chirality q) const { return q == Chirality::left ? n_left : n_right; }

    /// Enantiomeric excess (N_L - N_R) / N.
    double eta() const { return (n_left - n_right) / total(); }

    /// Loop phase seen by the given enantiomer.
    double phase(Chirality q) const { return q == Chirality::left ? phi : phi + std::numbers::pi; }

    /// Collective coupling g sqrt(N), rad/us.
    double collective_coupling() const { return g_a.value() * std::sqrt(total()); }

    bool operator==(const ModelParams&) const = default;
};

/// Collective moments of one enantiomer. Coherences s21, s31, s32 are the
/// complex conjugates of the stored fields and never stored themselves.
struct SpeciesMoments {
    cd s12{};
    cd s13{};
    cd s23{};
    double s11 = 0.0;
    double s22 = 0.0;
    double s33 = 0.0;

    double population() const { return s11 + s22 + s33; }
    bool operator==(const SpeciesMoments&) const = default;
};

struct MeanFieldState {
    cd a{};  // intracavity amplitude <a>
    SpeciesMoments left;
    SpeciesMoments right;

    const SpeciesMoments& species(Chirality q) const { return q == Chirality::left ? left : right; }
    SpeciesMoments& species(Chirality q) { return q == Chirality::left ? left : right; }
    bool operator==(const MeanFieldState&) const = default;
};

/// Returns params unchanged if every invariant holds, throws InvalidParams otherwise.
inline ModelParams validate(const ModelParams& p) {
    const auto finite = [](const char* name, AngularFrequency w) {
        if (!w.is_finite()) throw InvalidParams(name, "not finite");
    };
    const auto non_negative = [&](const char* name, AngularFrequency w) {
        finite(name, w);
        if (w.value() < 0.0) throw InvalidParams(name, "must be >= 0");
    };
    finite("delta_a", p.delta_a);
    finite("delta_31", p.delta_31);
    finite("delta_32", p.delta_32);
    finite("g_a", p.g_a);
    finite("omega_31", p.omega_31);
    finite("omega_32", p.omega_32);
    finite("kappa_a", p.kappa_a);
    if (p.kappa_a.value() <= 0.0) throw InvalidParams("kappa_a", "must be > 0");
    non_negative("gamma_21", p.gamma_21);
    non_negative("gamma_31", p.gamma_31);
    non_negative("gamma_32", p.gamma_32);
    if (!std::isfinite(p.n_left) || p.n_left < 0.0) throw InvalidParams("n_left", "must be finite and >= 0");
    if (!std::isfinite(p.n_right) || p.n_right < 0.0) throw InvalidParams("n_right", "must be finite and >= 0");
    if (!(p.total() > 0.0)) throw InvalidParams("n_left+n_right", "empty ensemble");
    if (!std::isfinite(p.phi)) throw InvalidParams("phi", "not finite");
    return p;
}

/// Resonance convention: cavity resonant with |2>-|1> and the |3>-|1> drive
/// on resonance, i.e. delta_31 = 0 and delta_a = -delta_32.
inline ModelParams link_detunings(ModelParams p) {
    p.delta_31 = AngularFrequency{};
    p.delta_a = -p.delta_32;
    return p;
}

/// Redistributes the ensemble at fixed N so that (N_L - N_R)/N = eta.
inline ModelParams with_eta(ModelParams p, double eta) {
    const double n = p.total();
    p.n_left = 0.5 * n * (1.0 + eta);
    p.n_right = 0.5 * n * (1.0 - eta);
    return p;
}

/// Reference operating point: all molecular decays 0.1 MHz, kappa 1 MHz,
/// g 0.1 MHz, N = 1e6, Omega_31 = 5 kHz, Omega_32 = 0.5 MHz, eta = 1, phi = 0,
/// detunings tied with delta_32 = g sqrt(N) (100 MHz).
inline ModelParams baseline_params() {
    ModelParams p;
    p.g_a = AngularFrequency::from_mhz(0.1);
    p.omega_31 = AngularFrequency::from_khz(5.0);
    p.omega_32 = AngularFrequency::from_mhz(0.5);
    p.kappa_a = AngularFrequency::from_mhz(1.0);
    p.gamma_21 = AngularFrequency::from_mhz(0.1);
    p.gamma_31 = AngularFrequency::from_mhz(0.1);
    p.gamma_32 = AngularFrequency::from_mhz(0.1);
    p.n_left = 1e6;
    p.n_right = 0.0;
    p.phi = 0.0;
    p.delta_32 = AngularFrequency::rad_per_us(p.collective_coupling());
    return link_detunings(p);
}

}  // namespace chiralcav
