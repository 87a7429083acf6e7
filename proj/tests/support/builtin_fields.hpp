#pragma once

#include <string>
#include <vector>

#include "loewner/evolution.hpp"
#include "loewner/field.hpp"

namespace loewner::testsupport {

struct NamedField {
    std::string name;
    FieldSpec field;
};

// G(z,t) = -z on the disc
FieldSpec radial_unit();
// G(z,t) = -z/(2 sqrt(t)) on the disc, order exactly 1
FieldSpec radial_singular();
// contraction rate jumping from 1 to 2 at t = 0.5
FieldSpec radial_piecewise();
// G(z) = 1 - z^2 on the disc (Denjoy-Wolff point at 1)
FieldSpec poly_tanh();
// Berkson-Porta tau = 1, p = (1+z)/(1-z); equals 1 - z^2
FieldSpec bp_boundary();
// A = -Id on the ball in C^2
FieldSpec linear_contract();
// A = [[-1, 0.3], [-0.3, -1]] on the ball in C^2
FieldSpec linear_spiral();
// the expanding control G(z) = +z (not Herglotz)
FieldSpec expanding_radial();

const std::vector<NamedField>& builtin_herglotz_fields();

// closed-form families on the disc used as verifier controls
EvolutionFamilyHandle exp_family();                 // z e^{-(t-s)}
EvolutionFamilyHandle tanh_family();                // tanh(t - s + arctanh z)
EvolutionFamilyHandle identity_family();
EvolutionFamilyHandle broken_composition_family();  // z e^{-(t-s)^2}
EvolutionFamilyHandle expanding_family();           // z e^{+(t-s)}
EvolutionFamilyHandle square_family();              // z^2 e^{-(t-s)}
EvolutionFamilyHandle real_part_family();           // Re(z) e^{-(t-s)}

} // namespace loewner::testsupport
