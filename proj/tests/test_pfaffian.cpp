#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eds/fixtures.hpp"
#include "eds/pfaffian.hpp"

using namespace eds;

namespace {

struct SG {
    Fixture f = build_fixture("sine_gordon");
    AlgPtr P = f.bt.P;
    AlgPtr M1 = f.bt.I1.algebra();
    Ctx m1 = M1->ctx();
    ScalarExpr sym(const char* n) { return ScalarExpr::symbol(m1, n); }

    // C11 = {theta1, dp - 1/2 sin(2z) dy, dx} on the side-1 chart
    std::vector<Form> C11() {
        return {f.bt.I1.theta(),
                M1->covector("dp") - M1->covector("dy") * (ScalarExpr(m1, Rational(1, 2)) *
                                                           sin(ScalarExpr(m1, 2) * sym("z"))),
                M1->covector("dx")};
    }
    std::vector<Form> C12() {
        return {f.bt.I1.theta(),
                M1->covector("dq") - M1->covector("dx") * (ScalarExpr(m1, Rational(1, 2)) *
                                                           sin(ScalarExpr(m1, 2) * sym("z"))),
                M1->covector("dy")};
    }
};

// definition check used as the independent oracle: every generator of D lies
// in span(S) and is closed mod S
bool satisfies_derived_definition(const PfaffianSystem& d, const PfaffianSystem& s) {
    for (const auto& g : d.generators()) {
        if (!s.contains(g)) return false;
        if (!reduce_mod(s.algebra()->d(g), s.generators()).is_zero()) return false;
    }
    return true;
}

} // namespace

TEST_CASE("cartan system ranks") {
    SG s;
    // zeta has Pfaff rank one
    CHECK(cartan_system(s.f.bt.zeta).rank() == 1);
    // a closed coordinate form has rank one
    CHECK(cartan_system(s.P->covector("dx")).rank() == 1);
    // the pulled-back contact form has rank five and is semi-basic for pi1
    Form th1 = s.f.section.theta1;
    PfaffianSystem r1 = cartan_system(th1);
    CHECK(r1.rank() == 5);
    std::vector<Form> semibasic;
    for (const char* c : {"x", "y", "z", "p", "q"})
        semibasic.push_back(s.f.bt.pi1.pullback(s.M1->d_symbol(s.M1->ctx()->symbol(c))));
    for (const auto& g : r1.generators()) CHECK(in_span(g, semibasic));
}

TEST_CASE("derived system of the first characteristic system") {
    SG s;
    PfaffianSystem C11(s.M1, s.C11());
    PfaffianSystem d = derived_system(C11);
    CHECK(d.rank() == 2);
    CHECK(satisfies_derived_definition(d, C11));
    // expected span {dx, dp - 1/2 sin(2z) dy}
    std::vector<Form> expect{s.C11()[1], s.C11()[2]};
    CHECK(same_span(d.generators(), expect));
    // theta1 itself is not closed mod C11 (maximality of the answer)
    CHECK(!reduce_mod(s.M1->d(s.f.bt.I1.theta()), s.C11()).is_zero());
    // a Frobenius system is its own derived system
    PfaffianSystem closed(s.M1, {s.M1->covector("dx"), s.M1->covector("dy")});
    CHECK(derived_system(closed).same_system(closed));
    CHECK(is_frobenius(closed));
}

TEST_CASE("derived system of the pulled-back characteristic system") {
    SG s;
    Ctx pc = s.P->ctx();
    std::vector<Form> gens{s.f.section.theta1, s.f.section.omega[0], s.f.section.omega[1]};
    PfaffianSystem sys(s.P, gens);
    PfaffianSystem d = derived_system(sys);
    CHECK(d.rank() == 2);
    // pattern {omega1 - C1 theta1, omega2 - C2 theta1} with C = [0, -lam cos(z+zb)]
    ScalarExpr C2 = -ScalarExpr::symbol(pc, "lam") *
                    cos(ScalarExpr::symbol(pc, "z") + ScalarExpr::symbol(pc, "zb"));
    std::vector<Form> expect{s.f.section.omega[0], s.f.section.omega[1] - s.f.section.theta1 * C2};
    CHECK(same_span(d.generators(), expect));
}

TEST_CASE("derived flags") {
    SG s;
    PfaffianSystem C11(s.M1, s.C11());
    auto flag = derived_flag(C11);
    std::vector<int> ranks;
    for (const auto& sys : flag) ranks.push_back(sys.rank());
    CHECK(ranks == std::vector<int>{3, 2, 1});
    CHECK(is_frobenius(flag.back()));
    // weakly decreasing, each step contained in the previous
    for (size_t i = 1; i < flag.size(); ++i) {
        CHECK(flag[i].rank() <= flag[i - 1].rank());
        for (const auto& g : flag[i].generators()) CHECK(flag[i - 1].contains(g));
    }
    // the flag of a single contact form dies immediately
    PfaffianSystem contact(s.M1, {s.f.bt.I1.theta()});
    auto cflag = derived_flag(contact);
    CHECK(cflag.back().rank() == 0);
}

TEST_CASE("rank-one integrable subsystems") {
    SG s;
    PfaffianSystem C11(s.M1, s.C11());
    auto w1 = integrable_rank_one(C11);
    REQUIRE(w1.has_value());
    // the witness is dx up to scale, and d(w) ^ w = 0 exactly
    CHECK(wedge(s.M1->d(*w1), *w1).is_zero());
    CHECK(same_span({*w1}, {s.M1->covector("dx")}));

    PfaffianSystem C12(s.M1, s.C12());
    auto w2 = integrable_rank_one(C12);
    REQUIRE(w2.has_value());
    CHECK(same_span({*w2}, {s.M1->covector("dy")}));

    // scale invariance: rescaling generators by nonzero factors
    auto gens = s.C11();
    gens[0] = gens[0] * ScalarExpr(s.m1, 3);
    gens[1] = gens[1] * ScalarExpr(s.m1, Rational(-1, 2));
    auto w3 = integrable_rank_one(PfaffianSystem(s.M1, gens));
    REQUIRE(w3.has_value());
    CHECK(same_span({*w3}, {*w1}));
}

TEST_CASE("pseudospherical characteristic systems have no integrable subsystem") {
    Fixture f = build_fixture("pseudospherical");
    auto cp = characteristic_systems(f.bt.I1);
    CHECK(!integrable_rank_one(cp.C1).has_value());
    CHECK(!integrable_rank_one(cp.C2).has_value());
    // terminal derived systems collapse to rank zero
    CHECK(derived_flag(cp.C1).back().rank() == 0);
    CHECK(derived_flag(cp.C2).back().rank() == 0);
}
