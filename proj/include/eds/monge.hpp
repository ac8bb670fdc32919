#ifndef EDS_MONGE_HPP
#define EDS_MONGE_HPP

#include <optional>
#include <vector>

#include "eds/pfaffian.hpp"

namespace eds {

// Monge-Ampere system: contact form theta, Theta = d(theta), and an
// independent 2-form Psi.  Frame-bundle presentations declare their Cauchy
// directions so the five Cartan directions are known.
class MongeAmpereSystem {
public:
    MongeAmpereSystem() = default;
    MongeAmpereSystem(AlgPtr alg, Form theta, Form psi,
                      std::vector<int> cauchy_dirs = {},
                      std::optional<Form> claw_form = std::nullopt);

    const AlgPtr& algebra() const { return alg_; }
    const Form& theta() const { return theta_; }
    const Form& Theta() const { return Theta_; }
    const Form& psi() const { return psi_; }
    const Form& claw_form() const { return claw_form_; }
    const std::vector<int>& cauchy_dirs() const { return cauchy_dirs_; }

private:
    AlgPtr alg_;
    Form theta_, Theta_, psi_, claw_form_;
    std::vector<int> cauchy_dirs_;
};

struct RootPair {
    ScalarExpr mu, nu; // normalized: nu = 1 when possible, else mu = 1
};

struct CharacteristicPair {
    PfaffianSystem C1, C2;
    RootPair root1, root2;
};

// solve (mu Theta + nu Psi)^2 == 0 mod theta; true iff two distinct real
// root rays exist with the discriminant certified positive
bool is_hyperbolic(const MongeAmpereSystem& s, std::vector<RootPair>* roots = nullptr);

// factor each decomposable root combination into two 1-forms mod theta
CharacteristicPair characteristic_systems(const MongeAmpereSystem& s);

// Backlund condition for a correspondence realized by the two projections:
// the pulled-back {Psi1, Psi2} lie in the span of {Theta1, Theta2} mod
// theta1, theta2, with Theta1, Theta2 independent (so each side's 2-form
// space span{Theta_i, Psi_i} coincides with span{Theta_1, Theta_2}).
// extra_mod restricts to a slice, e.g. by passing zeta
bool is_backlund_pair(const SmoothMap& pi1, const SmoothMap& pi2,
                      const MongeAmpereSystem& s1, const MongeAmpereSystem& s2,
                      const std::vector<Form>& extra_mod = {});

} // namespace eds

#endif
