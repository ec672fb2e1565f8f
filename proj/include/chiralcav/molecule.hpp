// molecule.hpp - working transitions of the cyclic three-level model.
//
// Working states: |1> = |g>|0_00>, |2> = |e>|1_11>, |3> = |e>|1_10>, with
// |g>,|e> the vibrational ground and first excited states. For J = 1 the
// rigid asymmetric-top energies are B+C (1_01), A+C (1_11) and A+B (1_10).
// M does not shift rigid-rotor energies and is not tracked.

#pragma once

#include <array>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "units.hpp"

namespace chiralcav {

struct MoleculeSpec {
    AngularFrequency rot_a;
    AngularFrequency rot_b;
    AngularFrequency rot_c;
    AngularFrequency omega_vib;
};

struct WorkingFrequencies {
    AngularFrequency omega_21;
    AngularFrequency omega_31;
    AngularFrequency omega_32;
};

struct RotorLevels {
    AngularFrequency e_101;
    AngularFrequency e_111;
    AngularFrequency e_110;
};

inline MoleculeSpec validate(const MoleculeSpec& m) {
    if (!(m.rot_a.is_finite() && m.rot_b.is_finite() && m.rot_c.is_finite() && m.omega_vib.is_finite()))
        throw InvalidParams("molecule", "constants must be finite");
    if (!(m.rot_a >= m.rot_b && m.rot_b >= m.rot_c && m.rot_c.value() > 0.0))
        throw InvalidParams("molecule", "rotational constants must satisfy A >= B >= C > 0");
    return m;
}

inline RotorLevels j1_rigid_rotor_energies(const MoleculeSpec& m) {
    validate(m);
    return {m.rot_b + m.rot_c, m.rot_a + m.rot_c, m.rot_a + m.rot_b};
}

inline WorkingFrequencies working_frequencies(const MoleculeSpec& m) {
    const RotorLevels e = j1_rigid_rotor_energies(m);
    const AngularFrequency w21 = m.omega_vib + e.e_111;
    const AngularFrequency w31 = m.omega_vib + e.e_110;
    // computed as a difference of the two so the loop closes bit-exactly
    return {w21, w31, w31 - w21};
}

/// 1,2-propanediol, OH-stretch band.
inline MoleculeSpec propanediol_12() {
    return {AngularFrequency::from_mhz(8524.405), AngularFrequency::from_mhz(3635.492),
            AngularFrequency::from_mhz(2788.699), AngularFrequency::from_mhz(100.95e6)};
}

inline std::array<std::string_view, 1> molecule_presets() { return {"propanediol-1,2"}; }

inline MoleculeSpec molecule_preset(std::string_view name) {
    if (name == "propanediol-1,2") return propanediol_12();
    throw ConfigError("unknown molecule preset '" + std::string(name) + "'");
}

}  // namespace chiralcav
