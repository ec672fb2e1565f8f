// observables.hpp - measurable quantities of a mean-field state.

#pragma once

#include <cmath>

#include "model.hpp"

namespace chiralcav {

struct Observables {
    cd a_out{};                     // sqrt(2 kappa) <a>, sqrt(rad/us)
    double i_out = 0.0;             // |a_out|^2, rad/us
    double i_out_over_2pi_mhz = 0.0;
    double p_e_left = 0.0;          // 0 for an empty species
    double p_e_right = 0.0;
};

/// Input-output relation with a vacuum input, <a_in> = 0.
inline cd output_amplitude(const MeanFieldState& s, const ModelParams& p) {
    return std::sqrt(2.0 * p.kappa_a.value()) * s.a;
}

inline double output_intensity(const MeanFieldState& s, const ModelParams& p) {
    return std::norm(output_amplitude(s, p));
}

/// Fraction of the species outside the ground state, (s22 + s33) / N_q.
inline double excitation_fraction(const MeanFieldState& s, Chirality which) {
    const SpeciesMoments& m = s.species(which);
    const double n = m.population();
    if (!(n > 0.0)) throw EmptySpecies(std::string("no ") + to_string(which) + "-handed molecules");
    return (m.s22 + m.s33) / n;
}

inline Observables observe(const MeanFieldState& s, const ModelParams& p) {
    Observables o;
    o.a_out = output_amplitude(s, p);
    o.i_out = std::norm(o.a_out);
    o.i_out_over_2pi_mhz = o.i_out / two_pi;
    if (p.n_left > 0.0) o.p_e_left = excitation_fraction(s, Chirality::left);
    if (p.n_right > 0.0) o.p_e_right = excitation_fraction(s, Chirality::right);
    return o;
}

}  // namespace chiralcav
