// layout.hpp - 18-component real packing of MeanFieldState in normalized units.
//
// Normalized variables: alpha = <a>/sqrt(N), s_jk = <S_jk>/N, p_j = <S_jj>/N.
// Index map: [0,1] Re/Im alpha; per species q (base 2 + 8q):
//   +0,+1 s12   +2,+3 s13   +4,+5 s23   +6 p1   +7 p2
// p3 is eliminated through p1 + p2 + p3 = N_q / N.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Core>

#include "../model.hpp"

namespace chiralcav::detail {

inline constexpr int n_unknowns = 18;
using Vec18 = Eigen::Matrix<double, n_unknowns, 1>;

inline constexpr int idx_a = 0;
inline constexpr int species_base(int q) { return 2 + 8 * q; }
inline constexpr int off_s12 = 0;
inline constexpr int off_s13 = 2;
inline constexpr int off_s23 = 4;
inline constexpr int off_p1 = 6;
inline constexpr int off_p2 = 7;

inline int species_index(Chirality q) { return q == Chirality::left ? 0 : 1; }

inline double fraction(const ModelParams& p, int q) {
    return (q == 0 ? p.n_left : p.n_right) / p.total();
}

inline cd get_c(const Vec18& x, int i) { return {x[i], x[i + 1]}; }
inline void set_c(Vec18& x, int i, cd z) {
    x[i] = z.real();
    x[i + 1] = z.imag();
}

/// Row/column scale factors between unscaled and normalized coordinates.
inline Vec18 scale_factors(double n_total) {
    Vec18 d;
    const double root = std::sqrt(n_total);
    d[0] = root;
    d[1] = root;
    for (int i = 2; i < n_unknowns; ++i) d[i] = n_total;
    return d;
}

inline Vec18 pack(const MeanFieldState& s, double n_total) {
    Vec18 x;
    set_c(x, idx_a, s.a / std::sqrt(n_total));
    for (int q = 0; q < 2; ++q) {
        const SpeciesMoments& m = q == 0 ? s.left : s.right;
        const int b = species_base(q);
        set_c(x, b + off_s12, m.s12 / n_total);
        set_c(x, b + off_s13, m.s13 / n_total);
        set_c(x, b + off_s23, m.s23 / n_total);
        x[b + off_p1] = m.s11 / n_total;
        x[b + off_p2] = m.s22 / n_total;
    }
    return x;
}

/// Inverse of pack; s33 is rebuilt from the species population.
inline MeanFieldState unpack(const Vec18& x, const ModelParams& p) {
    const double n = p.total();
    MeanFieldState s;
    s.a = get_c(x, idx_a) * std::sqrt(n);
    for (int q = 0; q < 2; ++q) {
        SpeciesMoments& m = q == 0 ? s.left : s.right;
        const int b = species_base(q);
        m.s12 = get_c(x, b + off_s12) * n;
        m.s13 = get_c(x, b + off_s13) * n;
        m.s23 = get_c(x, b + off_s23) * n;
        m.s11 = x[b + off_p1] * n;
        m.s22 = x[b + off_p2] * n;
        m.s33 = (q == 0 ? p.n_left : p.n_right) - m.s11 - m.s22;
    }
    return s;
}

}  // namespace chiralcav::detail
