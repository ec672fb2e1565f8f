// steady_solver.hpp - nonlinear mean-field steady state.
//
// The steady-state system is split into 18 real equations in 18 real
// unknowns: Re/Im of the cavity equation, and per species Re/Im of the
// S12, S13, S23 equations plus the S11 and S22 population equations. S33 is
// eliminated through the population constraint. <a> and <a^+> = conj<a> both
// appear, so the system is not complex-analytic; the real split is exact.
//
// Internally everything runs in normalized units (see detail/layout.hpp), in
// which the equations depend on g and N only through G = g sqrt(N).

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "analytic.hpp"
#include "detail/layout.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace chiralcav {

using ResidualVector = detail::Vec18;
using JacobianMatrix = Eigen::Matrix<double, detail::n_unknowns, detail::n_unknowns>;

struct SolveOptions {
    double tol_abs = 1e-10;  // on the normalized residual max-norm, rad/us
    int max_newton_iters = 50;
    int continuation_steps = 20;
    double damping = 1.0;  // initial Newton step fraction, (0, 1]
    /// Omega_31 of the first continuation step relative to the target.
    double continuation_start_ratio = 1e-3;
};

struct SolveReport {
    MeanFieldState state;
    double residual_norm = 0.0;
    int newton_iters_total = 0;
    int continuation_path_length = 0;
    bool converged = false;
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(SolveReport report, const std::string& what)
        : Error("NoConvergence", what), report_(std::move(report)) {}
    const SolveReport& report() const noexcept { return report_; }

private:
    SolveReport report_;
};

namespace detail {

/// Coefficients of the normalized equations.
struct NormalizedModel {
    cd k_a;   // i delta_a + kappa
    cd k_12;  // i (delta_31 - delta_32) + G21
    cd k_13;  // i delta_31 + G31 + G32
    cd k_23;  // i delta_32 + G21 + G31 + G32
    double G = 0.0;
    double o31 = 0.0;
    double o32 = 0.0;
    double g21 = 0.0;
    double g31 = 0.0;
    double g32 = 0.0;
    double frac[2] = {0.0, 0.0};
    cd loop[2];  // exp(i phi_q)
};

inline NormalizedModel normalized_model(const ModelParams& p, double omega31) {
    constexpr cd i{0.0, 1.0};
    NormalizedModel m;
    m.g21 = p.gamma_21.value();
    m.g31 = p.gamma_31.value();
    m.g32 = p.gamma_32.value();
    const double g3 = m.g31 + m.g32;
    m.k_a = i * p.delta_a.value() + p.kappa_a.value();
    m.k_12 = i * (p.delta_31.value() - p.delta_32.value()) + m.g21;
    m.k_13 = i * p.delta_31.value() + g3;
    m.k_23 = i * p.delta_32.value() + m.g21 + g3;
    m.G = p.collective_coupling();
    m.o31 = omega31;
    m.o32 = p.omega_32.value();
    for (int q = 0; q < 2; ++q) {
        m.frac[q] = fraction(p, q);
        m.loop[q] = std::exp(cd{0.0, p.phase(q == 0 ? Chirality::left : Chirality::right)});
    }
    return m;
}

inline Vec18 normalized_residual(const Vec18& x, const NormalizedModel& m) {
    constexpr cd i{0.0, 1.0};
    Vec18 r;
    const cd a = get_c(x, idx_a);
    const cd ac = std::conj(a);
    cd s12_sum{};
    for (int q = 0; q < 2; ++q) {
        const int b = species_base(q);
        const cd s12 = get_c(x, b + off_s12);
        const cd s13 = get_c(x, b + off_s13);
        const cd s23 = get_c(x, b + off_s23);
        const double p1 = x[b + off_p1];
        const double p2 = x[b + off_p2];
        const double p3 = m.frac[q] - p1 - p2;
        const cd e = m.loop[q];
        const cd ec = std::conj(e);
        s12_sum += s12;

        const cd e12 = -m.k_12 * s12 + i * m.G * a * (p2 - p1) + i * m.o31 * std::conj(s23) - i * m.o32 * ec * s13;
        const cd e13 = -m.k_13 * s13 + i * m.o31 * (p3 - p1) + i * m.G * a * s23 - i * m.o32 * e * s12;
        const cd e23 = -m.k_23 * s23 + i * m.o32 * e * (p3 - p2) - i * m.o31 * std::conj(s12) + i * m.G * ac * s13;
        const cd e11 = i * m.G * (a * std::conj(s12) - ac * s12) + i * m.o31 * (std::conj(s13) - s13) +
                       2.0 * m.g21 * p2 + 2.0 * m.g31 * p3;
        const cd e22 = i * m.G * (ac * s12 - a * std::conj(s12)) + i * m.o32 * (e * std::conj(s23) - ec * s23) -
                       2.0 * m.g21 * p2 + 2.0 * m.g32 * p3;
        set_c(r, b + off_s12, e12);
        set_c(r, b + off_s13, e13);
        set_c(r, b + off_s23, e23);
        r[b + off_p1] = e11.real();
        r[b + off_p2] = e22.real();
    }
    set_c(r, idx_a, -m.k_a * a - i * m.G * s12_sum);
    return r;
}

/// Accumulates complex partial derivatives into real Jacobian entries.
/// For an equation E and complex unknown z = u + iv with dE/dz = c and
/// dE/dconj(z) = d: dE/du = c + d, dE/dv = i (c - d).
class JacobianBuilder {
public:
    explicit JacobianBuilder(JacobianMatrix& j) : j_(j) {}

    void complex_row(int row, int col, cd c, cd d = {}) {
        const cd du = c + d;
        const cd dv = cd{0.0, 1.0} * (c - d);
        j_(row, col) += du.real();
        j_(row, col + 1) += dv.real();
        j_(row + 1, col) += du.imag();
        j_(row + 1, col + 1) += dv.imag();
    }
    void complex_row_real_var(int row, int col, cd c) {
        j_(row, col) += c.real();
        j_(row + 1, col) += c.imag();
    }
    void real_row(int row, int col, cd c, cd d = {}) {
        j_(row, col) += (c + d).real();
        j_(row, col + 1) += (cd{0.0, 1.0} * (c - d)).real();
    }
    void real_row_real_var(int row, int col, double c) { j_(row, col) += c; }

private:
    JacobianMatrix& j_;
};

inline JacobianMatrix normalized_jacobian(const Vec18& x, const NormalizedModel& m) {
    constexpr cd i{0.0, 1.0};
    JacobianMatrix jac = JacobianMatrix::Zero();
    JacobianBuilder jb(jac);
    const cd a = get_c(x, idx_a);
    const cd ac = std::conj(a);

    jb.complex_row(idx_a, idx_a, -m.k_a);
    for (int q = 0; q < 2; ++q) {
        const int b = species_base(q);
        const int c12 = b + off_s12, c13 = b + off_s13, c23 = b + off_s23, cp1 = b + off_p1, cp2 = b + off_p2;
        const cd s12 = get_c(x, c12);
        const cd s13 = get_c(x, c13);
        const cd s23 = get_c(x, c23);
        const double p1 = x[cp1];
        const double p2 = x[cp2];
        const cd e = m.loop[q];
        const cd ec = std::conj(e);

        jb.complex_row(idx_a, c12, -i * m.G);

        // S12 row
        jb.complex_row(c12, c12, -m.k_12);
        jb.complex_row(c12, idx_a, i * m.G * (p2 - p1));
        jb.complex_row(c12, c23, {}, i * m.o31);
        jb.complex_row(c12, c13, -i * m.o32 * ec);
        jb.complex_row_real_var(c12, cp1, -i * m.G * a);
        jb.complex_row_real_var(c12, cp2, i * m.G * a);

        // S13 row
        jb.complex_row(c13, c13, -m.k_13);
        jb.complex_row(c13, idx_a, i * m.G * s23);
        jb.complex_row(c13, c23, i * m.G * a);
        jb.complex_row(c13, c12, -i * m.o32 * e);
        jb.complex_row_real_var(c13, cp1, -2.0 * i * m.o31);
        jb.complex_row_real_var(c13, cp2, -i * m.o31);

        // S23 row
        jb.complex_row(c23, c23, -m.k_23);
        jb.complex_row(c23, c12, {}, -i * m.o31);
        jb.complex_row(c23, idx_a, {}, i * m.G * s13);
        jb.complex_row(c23, c13, i * m.G * ac);
        jb.complex_row_real_var(c23, cp1, -i * m.o32 * e);
        jb.complex_row_real_var(c23, cp2, -2.0 * i * m.o32 * e);

        // S11 row
        jb.real_row(cp1, idx_a, i * m.G * std::conj(s12), -i * m.G * s12);
        jb.real_row(cp1, c12, -i * m.G * ac, i * m.G * a);
        jb.real_row(cp1, c13, -i * m.o31, i * m.o31);
        jb.real_row_real_var(cp1, cp1, -2.0 * m.g31);
        jb.real_row_real_var(cp1, cp2, 2.0 * m.g21 - 2.0 * m.g31);

        // S22 row
        jb.real_row(cp2, idx_a, -i * m.G * std::conj(s12), i * m.G * s12);
        jb.real_row(cp2, c12, i * m.G * ac, -i * m.G * a);
        jb.real_row(cp2, c23, -i * m.o32 * ec, i * m.o32 * e);
        jb.real_row_real_var(cp2, cp1, -2.0 * m.g32);
        jb.real_row_real_var(cp2, cp2, -2.0 * m.g21 - 2.0 * m.g32);
    }
    return jac;
}

inline Vec18 vacuum(const NormalizedModel& m) {
    Vec18 x = Vec18::Zero();
    x[species_base(0) + off_p1] = m.frac[0];
    x[species_base(1) + off_p1] = m.frac[1];
    return x;
}

/// Damped Newton from x. Backtracks by halving (up to 30 times) while the
/// residual 2-norm does not decrease. Returns true on convergence and leaves
/// the last iterate in x.
inline bool newton(Vec18& x, const NormalizedModel& m, const SolveOptions& opts, int& iters, double& res_norm) {
    Vec18 r = normalized_residual(x, m);
    res_norm = r.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < opts.max_newton_iters; ++it) {
        if (res_norm < opts.tol_abs) return true;
        const JacobianMatrix jac = normalized_jacobian(x, m);
        const Eigen::FullPivLU<JacobianMatrix> lu(jac);
        if (!lu.isInvertible()) throw SingularJacobian("Newton linearization is singular");
        const Vec18 dx = lu.solve(r);
        if (!dx.allFinite()) throw SingularJacobian("Newton step is not finite");
        ++iters;

        const double norm0 = r.norm();
        double lambda = opts.damping;
        Vec18 trial = x - lambda * dx;
        Vec18 r_trial = normalized_residual(trial, m);
        for (int h = 0; h < 30 && !(r_trial.norm() < norm0); ++h) {
            lambda *= 0.5;
            trial = x - lambda * dx;
            r_trial = normalized_residual(trial, m);
        }
        x = trial;
        r = r_trial;
        res_norm = r.lpNorm<Eigen::Infinity>();
    }
    return res_norm < opts.tol_abs;
}

inline void check_options(const SolveOptions& o) {
    if (o.continuation_steps < 1) throw ConfigError("continuation_steps must be >= 1");
    if (o.max_newton_iters < 1) throw ConfigError("max_newton_iters must be >= 1");
    if (!(o.damping > 0.0 && o.damping <= 1.0)) throw ConfigError("damping must be in (0, 1]");
    if (!(o.tol_abs > 0.0)) throw ConfigError("tol_abs must be > 0");
    if (!(o.continuation_start_ratio > 0.0 && o.continuation_start_ratio <= 1.0))
        throw ConfigError("continuation_start_ratio must be in (0, 1]");
}

/// Rescales a neighbouring solution to new species fractions; an empty
/// species in the guess restarts from its ground state.
inline Vec18 adapt_guess(const Vec18& guess, const ModelParams& from, const ModelParams& to) {
    Vec18 x = guess;
    x.segment<2>(idx_a) *= std::sqrt(from.total() / to.total());
    for (int q = 0; q < 2; ++q) {
        const double f_old = fraction(from, q);
        const double f_new = fraction(to, q);
        auto seg = x.segment<8>(species_base(q));
        if (f_old > 0.0) {
            seg *= f_new / f_old;
        } else {
            seg.setZero();
            seg[off_p1] = f_new;
        }
    }
    return x;
}

}  // namespace detail

/// Unscaled residual of the 18 steady-state equations at state. Species rows
/// carry units of rad/us times N, cavity rows rad/us times sqrt(N).
inline ResidualVector residual(const MeanFieldState& state, const ModelParams& p) {
    const double n = p.total();
    const detail::Vec18 x = detail::pack(state, n);
    const detail::Vec18 rs = detail::normalized_residual(x, detail::normalized_model(p, p.omega_31.value()));
    return rs.cwiseProduct(detail::scale_factors(n));
}

/// Analytic Jacobian of residual() with respect to the unscaled unknowns
/// (Re/Im a; per species Re/Im s12, s13, s23, then s11, s22).
inline JacobianMatrix jacobian(const MeanFieldState& state, const ModelParams& p) {
    const double n = p.total();
    const detail::Vec18 d = detail::scale_factors(n);
    const detail::Vec18 x = detail::pack(state, n);
    const JacobianMatrix js = detail::normalized_jacobian(x, detail::normalized_model(p, p.omega_31.value()));
    return d.asDiagonal() * js * d.cwiseInverse().asDiagonal();
}

/// Max-norm of the normalized residual; the quantity compared against tol_abs.
inline double residual_norm(const MeanFieldState& state, const ModelParams& p) {
    const double n = p.total();
    return detail::normalized_residual(detail::pack(state, n), detail::normalized_model(p, p.omega_31.value()))
        .lpNorm<Eigen::Infinity>();
}

/// Steady state on the branch connected to the vacuum. Omega_31 is ramped
/// geometrically from continuation_start_ratio * target up to the target;
/// each step starts from the previous solution with coherences scaled
/// linearly and population deviations quadratically in Omega_31.
inline SolveReport solve_steady(const ModelParams& params, const SolveOptions& opts = {}) {
    validate(params);
    detail::check_options(opts);
    const double target = params.omega_31.value();
    SolveReport report;

    detail::NormalizedModel m = detail::normalized_model(params, target);
    const detail::Vec18 x0 = detail::vacuum(m);
    detail::Vec18 x = x0;

    if (target == 0.0) {
        report.state = zeroth_order_state(params);
        report.residual_norm = detail::normalized_residual(x, m).lpNorm<Eigen::Infinity>();
        report.converged = report.residual_norm < opts.tol_abs;
        if (!report.converged) throw NoConvergence(report, "undriven state is not stationary");
        return report;
    }

    const int n = opts.continuation_steps;
    const double ratio = n > 1 ? std::pow(opts.continuation_start_ratio, 1.0 / (n - 1)) : 1.0;
    double prev = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double omega = k == n ? target : target * std::pow(ratio, n - k);
        if (prev > 0.0) {
            const double s = omega / prev;
            detail::Vec18 dev = x - x0;
            for (int q = 0; q < 2; ++q) {
                const int b = detail::species_base(q);
                dev.segment<6>(b) *= s;
                dev.segment<2>(b + detail::off_p1) *= s * s;
            }
            dev.segment<2>(detail::idx_a) *= s;
            x = x0 + dev;
        }
        m.o31 = omega;
        double res = 0.0;
        const bool ok = detail::newton(x, m, opts, report.newton_iters_total, res);
        report.continuation_path_length = k;
        report.residual_norm = res;
        if (!ok) {
            report.state = detail::unpack(x, params);
            std::ostringstream msg;
            msg << "Newton did not converge at continuation step " << k << "/" << n << " (Omega_31 = "
                << omega / two_pi * 1e3 << " kHz/2pi, residual " << res << ")";
            throw NoConvergence(report, msg.str());
        }
        prev = omega;
    }
    report.state = detail::unpack(x, params);
    report.converged = true;
    return report;
}

/// Newton at the target drive starting from a nearby solution guess_state
/// (obtained at guess_params). Returns std::nullopt if Newton fails, so the
/// caller can fall back to solve_steady.
inline std::optional<SolveReport> refine_steady(const ModelParams& params, const MeanFieldState& guess_state,
                                                const ModelParams& guess_params, const SolveOptions& opts = {}) {
    validate(params);
    detail::check_options(opts);
    const detail::NormalizedModel m = detail::normalized_model(params, params.omega_31.value());
    detail::Vec18 x = detail::adapt_guess(detail::pack(guess_state, guess_params.total()), guess_params, params);
    SolveReport report;
    double res = 0.0;
    bool ok = false;
    try {
        ok = detail::newton(x, m, opts, report.newton_iters_total, res);
    } catch (const SingularJacobian&) {
        return std::nullopt;
    }
    if (!ok) return std::nullopt;
    report.state = detail::unpack(x, params);
    report.residual_norm = res;
    report.continuation_path_length = 1;
    report.converged = true;
    return report;
}

}  // namespace chiralcav
