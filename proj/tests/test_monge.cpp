#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eds/fixtures.hpp"
#include "eds/monge.hpp"

using namespace eds;

TEST_CASE("sine-Gordon hyperbolicity and characteristic systems") {
    Fixture f = build_fixture("sine_gordon");
    std::vector<RootPair> roots;
    REQUIRE(is_hyperbolic(f.bt.I1, &roots));
    REQUIRE(roots.size() == 2);
    // roots [0:1] and [1:1]
    CHECK(roots[0].mu.is_zero_canonical());
    CHECK(roots[0].nu.is_one());
    CHECK(roots[1].mu.is_one());
    CHECK(roots[1].nu.is_one());
    // each root combination squares to zero mod theta
    for (const auto& r : roots) {
        Form w = f.bt.I1.Theta() * r.mu + f.bt.I1.psi() * r.nu;
        CHECK(reduce_mod(wedge(w, w), {f.bt.I1.theta()}).is_zero());
    }

    auto cp = characteristic_systems(f.bt.I1);
    AlgPtr M1 = f.bt.I1.algebra();
    Ctx m1 = M1->ctx();
    ScalarExpr half(m1, Rational(1, 2));
    ScalarExpr z = ScalarExpr::symbol(m1, "z");
    std::vector<Form> C1{f.bt.I1.theta(),
                         M1->covector("dp") - M1->covector("dy") * (half * sin(ScalarExpr(m1, 2) * z)),
                         M1->covector("dx")};
    std::vector<Form> C2{f.bt.I1.theta(),
                         M1->covector("dq") - M1->covector("dx") * (half * sin(ScalarExpr(m1, 2) * z)),
                         M1->covector("dy")};
    bool match = (same_span(cp.C1.generators(), C1) && same_span(cp.C2.generators(), C2)) ||
                 (same_span(cp.C1.generators(), C2) && same_span(cp.C2.generators(), C1));
    CHECK(match);
    // the two systems intersect exactly in the contact form: rank of union = 5
    std::vector<Form> all = cp.C1.generators();
    for (const auto& g : cp.C2.generators()) all.push_back(g);
    CHECK(span_rank(all) == 5);
}

TEST_CASE("characteristic systems are stable under re-rooting") {
    Fixture f = build_fixture("sine_gordon");
    AlgPtr M1 = f.bt.I1.algebra();
    Ctx m1 = M1->ctx();
    // rescale Psi and shift it by a multiple of Theta: same spans
    Form psi2 = f.bt.I1.psi() * ScalarExpr(m1, 3) + f.bt.I1.Theta() * ScalarExpr(m1, 2);
    MongeAmpereSystem s2(M1, f.bt.I1.theta(), psi2);
    auto cp1 = characteristic_systems(f.bt.I1);
    auto cp2 = characteristic_systems(s2);
    bool match = (cp1.C1.same_system(cp2.C1) && cp1.C2.same_system(cp2.C2)) ||
                 (cp1.C1.same_system(cp2.C2) && cp1.C2.same_system(cp2.C1));
    CHECK(match);
}

TEST_CASE("wave equation characteristic systems (flat factorization)") {
    Fixture f = build_fixture("wave_pair");
    auto cp = characteristic_systems(f.bt.I1);
    AlgPtr M = f.bt.I1.algebra();
    std::vector<Form> Cp{f.bt.I1.theta(), M->covector("dp"), M->covector("dx")};
    std::vector<Form> Cq{f.bt.I1.theta(), M->covector("dq"), M->covector("dy")};
    bool match = (same_span(cp.C1.generators(), Cp) && same_span(cp.C2.generators(), Cq)) ||
                 (same_span(cp.C1.generators(), Cq) && same_span(cp.C2.generators(), Cp));
    CHECK(match);
}

TEST_CASE("repeated root is not hyperbolic") {
    Ctx c = ScalarContext::create();
    AlgPtr M = Algebra::coordinate_chart(c, {"x", "y", "z", "p", "q"});
    ScalarExpr p = ScalarExpr::symbol(c, "p"), q = ScalarExpr::symbol(c, "q");
    Form th = M->covector("dz") - M->covector("dx") * p - M->covector("dy") * q;
    // Theta^Psi = Psi^Psi = 0: the quadratic degenerates to a double root
    Form psi = wedge(M->covector("dp"), M->covector("dy"));
    MongeAmpereSystem s(M, th, psi);
    CHECK(!is_hyperbolic(s));
}

TEST_CASE("pseudospherical factorizations are exact wedge identities") {
    Fixture f = build_fixture("pseudospherical");
    AlgPtr M = f.bt.I1.algebra();
    Form e1 = M->covector("eta1"), e2 = M->covector("eta2");
    Form e13 = M->covector("eta13"), e23 = M->covector("eta23");
    // eta31 = -eta13, eta32 = -eta23
    Form plus = wedge(-e13 + e2, -e23 - e1);  // (eta31 + eta2) ^ (eta32 - eta1)
    Form minus = wedge(-e13 - e2, -e23 + e1); // (eta31 - eta2) ^ (eta32 + eta1)
    CHECK((f.bt.I1.psi() + f.bt.I1.Theta() - plus).is_zero());
    CHECK((f.bt.I1.psi() - f.bt.I1.Theta() - minus).is_zero());
    REQUIRE(is_hyperbolic(f.bt.I1));
    auto cp = characteristic_systems(f.bt.I1);
    std::vector<Form> Cplus{M->covector("eta3"), -e13 + e2, -e23 - e1};
    std::vector<Form> Cminus{M->covector("eta3"), -e13 - e2, -e23 + e1};
    bool match =
        (same_span(cp.C1.generators(), Cplus) && same_span(cp.C2.generators(), Cminus)) ||
        (same_span(cp.C1.generators(), Cminus) && same_span(cp.C2.generators(), Cplus));
    CHECK(match);
}

TEST_CASE("Backlund condition on the sine-Gordon slices") {
    Fixture f = build_fixture("sine_gordon");
    // slices are taken by reducing mod zeta on the parametric total space
    CHECK(is_backlund_pair(f.bt.pi1, f.bt.pi2, f.bt.I1, f.bt.I2, {f.bt.zeta}));
    // mod K the two Psi's coincide and Theta1 + Theta2 = -2 Psi1; hence
    // Theta1 = -2 Psi2 holds modulo the opposite Theta
    std::vector<Form> K{f.bt.pi1.pullback(f.bt.I1.theta()), f.bt.pi2.pullback(f.bt.I2.theta()),
                        f.bt.zeta};
    Ctx pc = f.bt.P->ctx();
    Form P1 = f.bt.pi1.pullback(f.bt.I1.psi());
    Form P2 = f.bt.pi2.pullback(f.bt.I2.psi());
    Form T1 = f.bt.pi1.pullback(f.bt.I1.Theta());
    Form T2 = f.bt.pi2.pullback(f.bt.I2.Theta());
    CHECK(reduce_mod(P1 - P2, K).is_zero());
    CHECK(reduce_mod(T1 + T2 + P1 * ScalarExpr(pc, 2), K).is_zero());
}

TEST_CASE("identity correspondence of the wave equation is degenerate") {
    Fixture f = build_fixture("wave_pair");
    CHECK(!is_backlund_pair(f.bt.pi1, f.bt.pi2, f.bt.I1, f.bt.I2));
}

TEST_CASE("Goursat slice at fixed parameter is a Backlund pair") {
    Fixture f = build_fixture("goursat");
    CHECK(is_backlund_pair(f.bt.pi1, f.bt.pi2, f.bt.I1, f.bt.I2, {f.bt.zeta}));
}

TEST_CASE("composed wave-to-wave correspondence is a Backlund pair") {
    Fixture f = build_fixture("zutrans");
    CHECK(is_backlund_pair(f.bt.pi1, f.bt.pi2, f.bt.I1, f.bt.I2, {f.bt.zeta}));
}
