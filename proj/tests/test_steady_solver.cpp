#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <chiralcav/analytic.hpp>
#include <chiralcav/dynamics.hpp>
#include <chiralcav/observables.hpp>
#include <chiralcav/steady_solver.hpp>

#include "support.hpp"

using namespace chiralcav;
using testing_support::rel_diff;

namespace {

// Unknown ordering of residual()/jacobian(): Re/Im a, then per species
// Re/Im s12, s13, s23, s11, s22.
std::array<double*, 18> unknowns(MeanFieldState& s) {
    std::array<double*, 18> u{};
    auto re = [](cd& z) { return &reinterpret_cast<double(&)[2]>(z)[0]; };
    auto im = [](cd& z) { return &reinterpret_cast<double(&)[2]>(z)[1]; };
    u[0] = re(s.a);
    u[1] = im(s.a);
    int k = 2;
    for (SpeciesMoments* m : {&s.left, &s.right}) {
        u[k++] = re(m->s12);
        u[k++] = im(m->s12);
        u[k++] = re(m->s13);
        u[k++] = im(m->s13);
        u[k++] = re(m->s23);
        u[k++] = im(m->s23);
        u[k++] = &m->s11;
        u[k++] = &m->s22;
    }
    return u;
}

// Random state of physical magnitude; s33 follows from the constraint.
MeanFieldState random_state(const ModelParams& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MeanFieldState s;
    const double rn = std::sqrt(p.total());
    s.a = {0.3 * rn * u(rng), 0.3 * rn * u(rng)};
    for (Chirality q : {Chirality::left, Chirality::right}) {
        const double nq = p.population(q);
        SpeciesMoments& m = s.species(q);
        m.s12 = {0.2 * nq * u(rng), 0.2 * nq * u(rng)};
        m.s13 = {0.2 * nq * u(rng), 0.2 * nq * u(rng)};
        m.s23 = {0.2 * nq * u(rng), 0.2 * nq * u(rng)};
        m.s22 = 0.2 * nq * (1 + u(rng));
        m.s11 = nq - m.s22 - 0.1 * nq * (1 + u(rng));
        m.s33 = nq - m.s11 - m.s22;
    }
    return s;
}

SolveReport solve_at(ModelParams p) { return solve_steady(p); }

}  // namespace

TEST(Residual, VacuumIsExactWithoutDrive) {
    ModelParams p = with_eta(baseline_params(), 0.3);
    p.omega_31 = AngularFrequency{};
    const ResidualVector r = residual(zeroth_order_state(p), p);
    EXPECT_EQ(r.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Residual, VacuumWithDriveOnlyExcitesS13Rows) {
    ModelParams p = with_eta(baseline_params(), 0.3);
    const ResidualVector r = residual(zeroth_order_state(p), p);
    const double o31 = p.omega_31.value();
    for (int k = 0; k < 18; ++k) {
        if (k == 4 || k == 5) continue;  // left s13
        if (k == 12 || k == 13) continue;  // right s13
        EXPECT_EQ(r[k], 0.0) << k;
    }
    // i Omega_31 (s33 - s11) = -i Omega_31 N_Q
    EXPECT_EQ(r[4], 0.0);
    EXPECT_NEAR(r[5], -o31 * p.n_left, 1e-12 * o31 * p.n_left);
    EXPECT_NEAR(r[13], -o31 * p.n_right, 1e-12 * o31 * p.n_right);
    EXPECT_NEAR(std::hypot(r[4], r[5]), o31 * p.n_left, 1e-12 * o31 * p.n_left);
}

TEST(Residual, AgreesWithEquationsOfMotion) {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 50; ++k) {
        const ModelParams p = testing_support::random_params(rng);
        MeanFieldState s = random_state(p, rng);
        const ResidualVector r = residual(s, p);
        MeanFieldState d = mean_field_rhs(s, p);
        const auto u = unknowns(d);
        double scale = 0.0;
        for (int j = 0; j < 18; ++j) scale = std::max(scale, std::abs(*u[j]));
        for (int j = 0; j < 18; ++j) EXPECT_NEAR(r[j], *u[j], 1e-12 * scale) << k << " row " << j;
    }
}

TEST(Jacobian, MatchesCentralDifferences) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const ModelParams p = testing_support::random_params(rng);
        const MeanFieldState s = random_state(p, rng);
        const JacobianMatrix j = jacobian(s, p);
        JacobianMatrix fd;
        for (int c = 0; c < 18; ++c) {
            MeanFieldState sp = s, sm = s;
            const double x = *unknowns(sp)[c];
            // 1e-6 of the unknown's natural scale: sqrt(N) for the field, N for moments
            const double h = 1e-6 * std::max(std::abs(x), c < 2 ? std::sqrt(p.total()) : p.total());
            *unknowns(sp)[c] += h;
            *unknowns(sm)[c] -= h;
            // keep the eliminated s33 consistent with the perturbed unknowns
            for (MeanFieldState* t : {&sp, &sm})
                for (Chirality q : {Chirality::left, Chirality::right}) {
                    SpeciesMoments& m = t->species(q);
                    m.s33 = p.population(q) - m.s11 - m.s22;
                }
            fd.col(c) = (residual(sp, p) - residual(sm, p)) / (2.0 * h);
        }
        for (int r = 0; r < 18; ++r) {
            const double row_max = j.row(r).cwiseAbs().maxCoeff();
            for (int c = 0; c < 18; ++c) {
                const double a = j(r, c), b = fd(r, c);
                const double mag = std::max(std::abs(a), std::abs(b));
                if (mag < 1e-9 * row_max) continue;  // structural zero up to rounding
                EXPECT_LT(std::abs(a - b) / mag, 1e-6) << trial << " (" << r << "," << c << ") " << a << " vs " << b;
            }
        }
    }
}

TEST(Jacobian, BlockDiagonalWithoutCouplings) {
    ModelParams p = with_eta(baseline_params(), 0.2);
    p.g_a = p.omega_31 = p.omega_32 = AngularFrequency{};
    std::mt19937_64 rng(31);
    const JacobianMatrix j = jacobian(random_state(p, rng), p);
    for (int r = 0; r < 18; ++r)
        for (int c = 0; c < 18; ++c) {
            const bool same_field = r / 2 == c / 2 || (r >= 8 && r < 10 && c >= 8 && c < 10) ||
                                    (r >= 16 && c >= 16);
            if (!same_field) {
                EXPECT_EQ(j(r, c), 0.0) << r << "," << c;
            }
        }
    EXPECT_NEAR(j(0, 0), -p.kappa_a.value(), 1e-15);
}

TEST(Jacobian, CavityRowCouplingIsMinusG) {
    const ModelParams p = with_eta(baseline_params(), 0.5);
    const JacobianMatrix j = jacobian(zeroth_order_state(p), p);
    const double g = p.g_a.value();
    // d(Re adot)/d(Im s12) and d(Im adot)/d(Re s12) from -i g s12
    for (int b : {2, 10}) {
        EXPECT_NEAR(j(0, b), 0.0, 1e-15);
        EXPECT_NEAR(j(0, b + 1), g, 1e-15);
        EXPECT_NEAR(j(1, b), -g, 1e-15);
        EXPECT_NEAR(j(1, b + 1), 0.0, 1e-15);
    }
}

TEST(Solve, UndrivenReturnsVacuum) {
    ModelParams p = baseline_params();
    p.omega_31 = AngularFrequency{};
    const SolveReport r = solve_steady(p);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.newton_iters_total, 0);
    EXPECT_EQ(r.state, zeroth_order_state(p));
}

TEST(Solve, WeakDriveMatchesFirstOrder) {
    const ModelParams p = baseline_params();
    const SolveReport r = solve_at(p);
    ASSERT_TRUE(r.converged);
    EXPECT_LT(r.residual_norm, SolveOptions{}.tol_abs);
    EXPECT_LT(residual_norm(r.state, p), SolveOptions{}.tol_abs);
    EXPECT_LT(rel_diff(output_intensity(r.state, p), output_intensity_low_excitation(p)), 0.01);
}

TEST(Solve, StrongDriveAnchor) {
    const SolveReport r = solve_at(testing_support::strong_drive());
    ASSERT_TRUE(r.converged);
    const double i = output_intensity(r.state, testing_support::strong_drive()) / two_pi;
    EXPECT_NEAR(i, 700.0, 105.0);
    // frozen regression value of this solver
    EXPECT_NEAR(i, 682.406, 1e-3);
}

TEST(Solve, ConvergedStateIsStationaryForDynamics) {
    const ModelParams p = testing_support::strong_drive();
    const SolveReport r = solve_at(p);
    const MeanFieldState d = mean_field_rhs(r.state, p);
    const detail::Vec18 x = detail::pack(d, p.total());
    EXPECT_LT(x.lpNorm<Eigen::Infinity>(), 10 * SolveOptions{}.tol_abs);
}

TEST(Solve, ChiralityExchangeSymmetry) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 12; ++k) {
        ModelParams p = testing_support::strong_drive();
        p = with_eta(p, -1.0 + 2.0 * u(rng));
        p.phi = 2.0 * std::numbers::pi * u(rng);
        p.delta_32 = AngularFrequency::from_mhz(-150.0 + 300.0 * u(rng));
        p = link_detunings(p);
        ModelParams q = p;
        std::swap(q.n_left, q.n_right);
        q.phi += std::numbers::pi;
        const double a = output_intensity(solve_at(p).state, p);
        const double b = output_intensity(solve_at(q).state, q);
        EXPECT_LT(rel_diff(a, b), 1e-8) << k;
    }
}

TEST(Solve, GaugeInvarianceInPhi) {
    // a, s12 -> e^{-i t}, s23 -> e^{i t} maps the phi equations onto phi + t,
    // so the intensity cannot depend on phi even beyond first order.
    ModelParams p = with_eta(testing_support::strong_drive(), 0.6);
    const double i0 = output_intensity(solve_at(p).state, p);
    for (double phi : {0.5, 1.7, 3.0, 4.4}) {
        p.phi = phi;
        EXPECT_LT(rel_diff(output_intensity(solve_at(p).state, p), i0), 1e-8);
    }
}

TEST(Solve, PopulationsBoundedAndConserved) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        ModelParams p = baseline_params();
        p.omega_31 = AngularFrequency::from_khz(1.0 + 24.0 * u(rng));
        p.delta_32 = AngularFrequency::from_mhz(-150.0 + 300.0 * u(rng));
        p = with_eta(link_detunings(p), -1.0 + 2.0 * u(rng));
        p.phi = 2.0 * std::numbers::pi * u(rng);
        const SolveReport r = solve_at(p);
        ASSERT_TRUE(r.converged);
        for (Chirality q : {Chirality::left, Chirality::right}) {
            const SpeciesMoments& m = r.state.species(q);
            const double nq = p.population(q);
            EXPECT_NEAR(m.population(), nq, 1e-9 * p.total());
            for (double v : {m.s11, m.s22, m.s33}) {
                EXPECT_GE(v, -1e-6 * nq);
                EXPECT_LE(v, nq + 1e-6 * nq);
            }
        }
    }
}

TEST(Solve, WeakDriveErrorShrinksMonotonically) {
    ModelParams p = baseline_params();
    double prev = std::numeric_limits<double>::infinity();
    for (double khz : {5.0, 2.5, 1.25, 0.625}) {
        p.omega_31 = AngularFrequency::from_khz(khz);
        const cd a = solve_at(p).state.a;
        const cd a1 = first_order_cavity_amplitude(p);
        const double err = std::abs(a - a1) / std::abs(a1);
        EXPECT_LT(err, prev) << khz;
        prev = err;
    }
}

TEST(Solve, NoConvergenceCarriesReport) {
    SolveOptions o;
    o.max_newton_iters = 1;
    o.continuation_steps = 1;
    try {
        solve_steady(testing_support::strong_drive(), o);
        FAIL() << "expected NoConvergence";
    } catch (const NoConvergence& e) {
        EXPECT_FALSE(e.report().converged);
        EXPECT_EQ(e.report().continuation_path_length, 1);
        EXPECT_GT(e.report().residual_norm, o.tol_abs);
        EXPECT_EQ(e.kind(), "NoConvergence");
    }
}

TEST(Solve, RejectsBadOptionsAndParams) {
    SolveOptions o;
    o.continuation_steps = 0;
    EXPECT_THROW(solve_steady(baseline_params(), o), ConfigError);
    o = {};
    o.damping = 0.0;
    EXPECT_THROW(solve_steady(baseline_params(), o), ConfigError);
    ModelParams p = baseline_params();
    p.kappa_a = AngularFrequency{};
    EXPECT_THROW(solve_steady(p), InvalidParams);
}

TEST(Refine, WarmStartReproducesColdSolve) {
    ModelParams p = testing_support::strong_drive();
    const SolveReport cold = solve_at(p);
    ModelParams q = p;
    q.delta_32 = q.delta_32 + AngularFrequency::from_mhz(2.0);
    q = with_eta(link_detunings(q), 0.9);
    const auto warm = refine_steady(q, cold.state, p);
    ASSERT_TRUE(warm.has_value());
    EXPECT_LT(rel_diff(warm->state.a, solve_at(q).state.a), 1e-8);
    EXPECT_LT(warm->newton_iters_total, solve_at(q).newton_iters_total);
}
