#ifndef EDS_CLAWS_HPP
#define EDS_CLAWS_HPP

#include "eds/backlund.hpp"

namespace eds {

// ---------------------------------------------------------------------------
// Conservation laws of a Monge-Ampere ideal: Phi = Q * claw_form + theta ^
// gamma, closed.  gamma is normalized to have no component on the leading
// direction of theta.
// ---------------------------------------------------------------------------

// gamma solved from d(Phi) == 0 mod theta (unique); throws NoSolution when
// the congruence cannot be met
Form solve_gamma(const MongeAmpereSystem& s, const ScalarExpr& Q);

Form ma_claw_form(const MongeAmpereSystem& s, const ScalarExpr& Q, const Form& gamma);

// d(Phi) == 0 identically (free constants are plain symbols, so this is
// coefficient-wise in them)
bool verify_closed_ma(const MongeAmpereSystem& s, const ScalarExpr& Q, const Form& gamma);

// ---------------------------------------------------------------------------
// Conservation laws of the correspondence ideal J = {theta1, theta2,
// d theta1, d theta2} on the slices: Phi = theta1 ^ sum P_i omega^i +
// theta2 ^ sum Q_i omega^i + R theta1 ^ theta2, closed mod zeta.  All
// computations run on the section presentation of the total space.
// ---------------------------------------------------------------------------

struct JClawSpace {
    ParametricBT bt;   // on the section algebra
    SectionCoframe cf; // its basis coframe
    TorsionTable torsion;
};

JClawSpace jclaw_space(const ParametricBT& bt, const SectionCoframe& cf);

struct JClaw {
    std::array<ScalarExpr, 4> P, Q;
    ScalarExpr R;
};

Form jclaw_form(const JClawSpace& js, const JClaw& c);
bool verify_closed_j(const JClawSpace& js, const JClaw& c); // d Phi == 0 mod zeta

// the linear relations forced by closedness: Q_i = q_coeff[i] * P_i from
// d(Phi) == 0 mod {theta1, theta2, zeta}, and the coefficient functions of
// the forced R = sum r_coeff[i] * P_i
struct JClawRelations {
    std::array<ScalarExpr, 4> q_coeff;
    std::array<ScalarExpr, 4> r_coeff;
};

JClawRelations jclaw_symmetry_relations(const JClawSpace& js);

// pull a side conservation law back to the slice and renormalize into the
// J-claw form by subtracting d(a theta1 + b theta2); throws
// NormalFormFailure when the residue is not a multiple of d theta1, d theta2
JClaw pullback_claw(const JClawSpace& js, int side, const ScalarExpr& Q, const Form& gamma);

// normalize an arbitrary closed 2-form of the ideal given on the section
// algebra (used by tests for exactness-quotient invariance)
JClaw normalize_jclaw(const JClawSpace& js, const Form& phi);

} // namespace eds

#endif
