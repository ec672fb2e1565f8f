#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <chiralcav/molecule.hpp>

using namespace chiralcav;

namespace {

// Brute-force J = 1 block of the rigid asymmetric rotor H = A Ja^2 + B Jb^2 + C Jc^2
// in the |1, m> basis, with the molecular axes a, b, c mapped onto z, x, y.
Eigen::Vector3d j1_oracle(double a, double b, double c) {
    using M = Eigen::Matrix3cd;
    const double r2 = std::sqrt(2.0);
    M jp = M::Zero();  // raising operator, basis order m = 1, 0, -1
    jp(0, 1) = r2;
    jp(1, 2) = r2;
    const M jm = jp.adjoint();
    const M jx = 0.5 * (jp + jm);
    const M jy = std::complex<double>(0.0, -0.5) * (jp - jm);
    M jz = M::Zero();
    jz(0, 0) = 1.0;
    jz(2, 2) = -1.0;
    const M h = a * jz * jz + b * jx * jx + c * jy * jy;
    Eigen::SelfAdjointEigenSolver<M> es(h);
    return es.eigenvalues();
}

MoleculeSpec spec(double a, double b, double c, double vib) {
    return {AngularFrequency::from_mhz(a), AngularFrequency::from_mhz(b), AngularFrequency::from_mhz(c),
            AngularFrequency::from_mhz(vib)};
}

}  // namespace

TEST(RigidRotor, MatchesBruteForceDiagonalization) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(100.0, 20000.0);
    for (int k = 0; k < 200; ++k) {
        double v[3] = {u(rng), u(rng), u(rng)};
        std::sort(v, v + 3, std::greater<>());
        const RotorLevels e = j1_rigid_rotor_energies(spec(v[0], v[1], v[2], 0.0));
        const Eigen::Vector3d ref = j1_oracle(v[0], v[1], v[2]);
        const double tol = 1e-10 * v[0];
        EXPECT_NEAR(e.e_101.to_mhz(), ref[0], tol);
        EXPECT_NEAR(e.e_111.to_mhz(), ref[1], tol);
        EXPECT_NEAR(e.e_110.to_mhz(), ref[2], tol);
    }
}

TEST(RigidRotor, StrictOrdering) {
    const RotorLevels e = j1_rigid_rotor_energies(propanediol_12());
    EXPECT_LT(e.e_101, e.e_111);
    EXPECT_LT(e.e_111, e.e_110);
}

TEST(RigidRotor, SphericalTopDegenerate) {
    const RotorLevels e = j1_rigid_rotor_energies(spec(5000.0, 5000.0, 5000.0, 0.0));
    EXPECT_DOUBLE_EQ(e.e_101.to_mhz(), 10000.0);
    EXPECT_DOUBLE_EQ(e.e_111.to_mhz(), 10000.0);
    EXPECT_DOUBLE_EQ(e.e_110.to_mhz(), 10000.0);
}

TEST(RigidRotor, PropanediolSplitting) {
    const RotorLevels e = j1_rigid_rotor_energies(propanediol_12());
    EXPECT_NEAR((e.e_110 - e.e_111).to_mhz(), 3635.492 - 2788.699, 1e-9);
}

TEST(WorkingFrequencies, Propanediol) {
    const WorkingFrequencies w = working_frequencies(propanediol_12());
    EXPECT_NEAR(w.omega_32.to_mhz(), 846.793, 1e-6);
    EXPECT_NEAR(w.omega_32.to_mhz() * 1e-3, 0.8468, 5e-5);
    // printed to 6 significant figures in THz
    EXPECT_NEAR(w.omega_21.to_mhz() * 1e-6, 100.961, 5e-4);
    EXPECT_NEAR(w.omega_31.to_mhz() * 1e-6, 100.962, 5e-4);
}

TEST(WorkingFrequencies, NoVibrationLeavesRotorSums) {
    const WorkingFrequencies w = working_frequencies(spec(9000.0, 4000.0, 3000.0, 0.0));
    EXPECT_DOUBLE_EQ(w.omega_21.to_mhz(), 12000.0);
    EXPECT_DOUBLE_EQ(w.omega_31.to_mhz(), 13000.0);
}

TEST(WorkingFrequencies, CyclicClosure) {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(100.0, 20000.0), vib(0.0, 2e8);
    for (int k = 0; k < 200; ++k) {
        double v[3] = {u(rng), u(rng), u(rng)};
        std::sort(v, v + 3, std::greater<>());
        const WorkingFrequencies w = working_frequencies(spec(v[0], v[1], v[2], vib(rng)));
        EXPECT_EQ(w.omega_32, w.omega_31 - w.omega_21);
    }
}

TEST(MoleculeSpec, Validation) {
    EXPECT_THROW(validate(spec(1000.0, 2000.0, 500.0, 0.0)), InvalidParams);
    EXPECT_THROW(validate(spec(1000.0, 500.0, 0.0, 0.0)), InvalidParams);
    EXPECT_NO_THROW(validate(propanediol_12()));
    EXPECT_THROW(molecule_preset("water"), ConfigError);
    EXPECT_EQ(molecule_preset("propanediol-1,2").rot_a, propanediol_12().rot_a);
}
