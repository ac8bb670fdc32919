#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "eds/fixtures.hpp"
#include "eds/form.hpp"
#include "eds/linalg.hpp"

using namespace eds;

namespace {

struct SG {
    Fixture f = build_fixture("sine_gordon");
    AlgPtr P = f.bt.P;
    Ctx pc = P->ctx();
    ScalarExpr sym(const char* n) { return ScalarExpr::symbol(pc, n); }
};

Form random_form(AlgPtr alg, int degree, std::mt19937& rng) {
    const Ctx& ctx = alg->ctx();
    std::vector<ScalarExpr> pool{
        ScalarExpr(ctx, 1), ScalarExpr(ctx, -2), ScalarExpr::symbol(ctx, "x"),
        ScalarExpr::symbol(ctx, "q") * ScalarExpr::symbol(ctx, "y"),
        sin(ScalarExpr::symbol(ctx, "z") + ScalarExpr::symbol(ctx, "zb")),
        cos(ScalarExpr::symbol(ctx, "z")) * ScalarExpr::symbol(ctx, "lam")};
    Form r(alg);
    int n = alg->dim();
    for (int t = 0; t < 3; ++t) {
        std::vector<int> idx;
        while (static_cast<int>(idx.size()) < degree) {
            int i = static_cast<int>(rng() % n);
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
        }
        r.add(idx, pool[rng() % pool.size()]);
    }
    return r;
}

} // namespace

TEST_CASE("wedge: antisymmetry, graded commutativity, associativity") {
    SG s;
    Form dx = s.P->covector("dx");
    CHECK(wedge(dx, dx).is_zero());

    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        int da = 1 + static_cast<int>(rng() % 2), db = 1 + static_cast<int>(rng() % 2);
        Form a = random_form(s.P, da, rng), b = random_form(s.P, db, rng);
        Form ab = wedge(a, b), ba = wedge(b, a);
        if ((da * db) % 2 == 1) CHECK((ab + ba).is_zero());
        else CHECK((ab - ba).is_zero());
        Form c = random_form(s.P, 1, rng);
        CHECK((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).is_zero());
    }
}

TEST_CASE("exterior derivative: contact example, d^2 = 0, Leibniz") {
    SG s;
    // d(dz - p dx - q dy) = -dp^dx - dq^dy (on the side-1 chart)
    const auto& M1 = s.f.bt.I1.algebra();
    Form theta = s.f.bt.I1.theta();
    Form expected = -wedge(M1->covector("dp"), M1->covector("dx")) -
                    wedge(M1->covector("dq"), M1->covector("dy"));
    CHECK((M1->d(theta) - expected).is_zero());

    std::mt19937 rng(5);
    for (int i = 0; i < 40; ++i) {
        Form a = random_form(s.P, 1 + static_cast<int>(rng() % 2), rng);
        CHECK(s.P->d(s.P->d(a)).is_zero());
        Form b = random_form(s.P, 1 + static_cast<int>(rng() % 2), rng);
        int p = a.degree();
        Form lhs = s.P->d(wedge(a, b));
        Form rhs = wedge(s.P->d(a), b) +
                   (p % 2 == 0 ? wedge(a, s.P->d(b)) : -wedge(a, s.P->d(b)));
        CHECK((lhs - rhs).is_zero());
    }
}

TEST_CASE("structure equations of the flat frame algebra close") {
    Ctx c = ScalarContext::create();
    AlgPtr F = euclidean_frame_algebra(c);
    // d eta3 = -eta31 ^ eta1 - eta32 ^ eta2 = eta13 ^ eta1 + eta23 ^ eta2
    Form d3 = F->d(F->covector("eta3"));
    Form expect = wedge(F->covector("eta13"), F->covector("eta1")) +
                  wedge(F->covector("eta23"), F->covector("eta2"));
    CHECK((d3 - expect).is_zero());
}

TEST_CASE("reduce_mod: sine-Gordon congruences") {
    SG s;
    std::vector<Form> K{s.f.section.theta1, s.f.section.theta2, s.f.bt.zeta};
    Form dth1 = s.P->d(s.f.section.theta1);
    Form target = wedge(s.f.section.omega[0], s.f.section.omega[1]) +
                  wedge(s.f.section.omega[2], s.f.section.omega[3]);
    CHECK(reduce_mod(dth1 - target, K).is_zero());
    // A2 = -1 on the second contact form
    Form dth2 = s.P->d(s.f.section.theta2);
    Form target2 = wedge(s.f.section.omega[0], s.f.section.omega[1]) -
                   wedge(s.f.section.omega[2], s.f.section.omega[3]);
    CHECK(reduce_mod(dth2 - target2, K).is_zero());
    // ideal membership; idempotence
    CHECK(reduce_mod(s.f.section.theta1, {s.f.section.theta1}).is_zero());
    std::vector<Form> ideal;
    for (const auto& g : K)
        for (int j = 0; j < s.P->dim(); ++j) ideal.push_back(wedge(g, s.P->covector(j)));
    std::mt19937 rng(9);
    for (int i = 0; i < 12; ++i) {
        Form a = random_form(s.P, 2, rng);
        Form r = reduce_mod(a, K);
        CHECK((reduce_mod(r, K) - r).is_zero());
        // a - reduce_mod(a, K) lies in the algebraic ideal of K
        if (i < 4) CHECK(in_span(a - r, ideal));
    }
}

TEST_CASE("reduce_mod error paths") {
    SG s;
    Form th = s.f.section.theta1;
    CHECK_THROWS_AS(reduce_mod(s.P->covector("dx"), {th, th * s.sym("lam")}),
                    DependentGenerators);
    // a generator with no certified pivot
    Form bad = s.P->covector("dx") * sin(s.sym("z") + s.sym("zb"));
    CHECK_THROWS_AS(reduce_mod(s.P->covector("dy"), {bad}), UnknownPivot);
}

TEST_CASE("interior product and Lie derivative") {
    SG s;
    const auto& M1 = s.f.bt.I1.algebra();
    Ctx m1 = M1->ctx();
    const VectorField& v = s.f.side_fields.at("v");
    // v . dz = 0, v . dp = -p
    CHECK(interior_product(v, M1->covector("dz")).is_zero());
    Form vdp = interior_product(v, M1->covector("dp"));
    CHECK((vdp.coefficient({}) + ScalarExpr::symbol(m1, "p")).is_zero() == ZeroTest::Zero);

    std::mt19937 rng(13);
    for (int i = 0; i < 30; ++i) {
        Form a = random_form(s.P, 1 + static_cast<int>(rng() % 2), rng);
        Form b = random_form(s.P, 1, rng);
        VectorField w{s.P,
                      {{0, s.sym("x")}, {2, s.sym("q") * s.sym("lam")}, {5, ScalarExpr(s.pc, 2)}}};
        // derivation law
        Form lhs = interior_product(w, wedge(a, b));
        Form rhs = wedge(interior_product(w, a), b) +
                   (a.degree() % 2 == 0 ? wedge(a, interior_product(w, b))
                                        : -wedge(a, interior_product(w, b)));
        CHECK((lhs - rhs).is_zero());
        // iota_w iota_w = 0
        CHECK(interior_product(w, interior_product(w, wedge(a, b))).is_zero());
        // naturality: L_w d = d L_w
        CHECK((lie_derivative(w, s.P->d(a)) - s.P->d(lie_derivative(w, a))).is_zero());
    }

    // L_{d/dx} theta1 = 0 (coefficients do not involve x)
    VectorField ddx{s.P, {{0, ScalarExpr(s.pc, 1)}}};
    CHECK(lie_derivative(ddx, s.f.section.theta1).is_zero());
}

TEST_CASE("pullback: composition and identity") {
    SG s;
    SmoothMap id = SmoothMap::identity(s.P);
    std::mt19937 rng(17);
    for (int i = 0; i < 10; ++i) {
        Form a = random_form(s.P, 2, rng);
        CHECK((id.pullback(a) - a).is_zero());
    }
    // composite pullback equals two-step pullback
    const auto& M1 = s.f.bt.I1.algebra();
    Ctx m1 = M1->ctx();
    std::map<std::string, ScalarExpr> tbl;
    ScalarExpr two(m1, 2);
    tbl["x"] = ScalarExpr::symbol(m1, "x") * two;
    tbl["y"] = ScalarExpr::symbol(m1, "y");
    tbl["z"] = ScalarExpr::symbol(m1, "z");
    tbl["p"] = ScalarExpr::symbol(m1, "p");
    tbl["q"] = ScalarExpr::symbol(m1, "q") + ScalarExpr::symbol(m1, "x");
    SmoothMap g = SmoothMap::coordinate(M1, M1, tbl);
    SmoothMap composite = g.after(s.f.bt.pi1);
    Form b = wedge(M1->covector("dp"), M1->covector("dx")) * tbl["q"];
    CHECK((composite.pullback(b) - s.f.bt.pi1.pullback(g.pullback(b))).is_zero());
}

TEST_CASE("pullback of theta2 under the parametric flow map") {
    // flow chart: the slice at lam = 1 crossed with the flow time t
    Ctx bc = ScalarContext::create();
    AlgPtr B = Algebra::coordinate_chart(bc, {"x", "y", "z", "zb", "pb", "q"});
    Ctx fc = ScalarContext::create();
    AlgPtr BT = Algebra::coordinate_chart(fc, {"x", "y", "z", "zb", "pb", "q", "t"});
    ScalarExpr x = ScalarExpr::symbol(fc, "x"), y = ScalarExpr::symbol(fc, "y");
    ScalarExpr z = ScalarExpr::symbol(fc, "z"), zb = ScalarExpr::symbol(fc, "zb");
    ScalarExpr pb = ScalarExpr::symbol(fc, "pb"), q = ScalarExpr::symbol(fc, "q");
    ScalarExpr t = ScalarExpr::symbol(fc, "t");
    ScalarExpr et = exp(t), emt = exp(-t);
    ScalarExpr szzb = sin(z + zb);
    // phi(x,y,p,q,z,zb; t) = (e^t x, e^-t y, e^-t p, e^t q, z, zb) with
    // p = pb + sin(z+zb) on the lam = 1 slice
    std::map<std::string, ScalarExpr> tbl;
    tbl["x"] = et * x;
    tbl["y"] = emt * y;
    tbl["z"] = z;
    tbl["zb"] = zb;
    tbl["q"] = et * q;
    tbl["pb"] = emt * (pb + szzb) - szzb;
    SmoothMap phi = SmoothMap::coordinate(BT, B, tbl);

    ScalarExpr bzb = ScalarExpr::symbol(bc, "zb"), bz = ScalarExpr::symbol(bc, "z");
    ScalarExpr bpb = ScalarExpr::symbol(bc, "pb"), bq = ScalarExpr::symbol(bc, "q");
    Form theta2 = B->covector("dzb") - B->covector("dx") * bpb -
                  B->covector("dy") * (-bq + sin(bz - bzb));
    Form pulled = phi.pullback(theta2);

    // mod dt this is dzb - (p - lam sin(z+zb)) dx - (-q + sin(z-zb)/lam) dy
    // with lam = e^t and p = pb + sin(z+zb)
    ScalarExpr p = pb + szzb;
    Form expected = BT->covector("dzb") - BT->covector("dx") * (p - et * szzb) -
                    BT->covector("dy") * (-q + emt * sin(z - zb));
    CHECK(reduce_mod(pulled - expected, {BT->covector("dt")}).is_zero());
}

TEST_CASE("change of coframe keeps d^2 = 0 and transports forms") {
    SG s;
    std::vector<std::string> names{"zeta", "th1", "th2", "w1", "w2", "w3", "w4"};
    std::vector<std::vector<ScalarExpr>> to_old, from_old;
    AlgPtr sec = s.P->change_basis(names, s.f.section.all(), &to_old, &from_old);
    CHECK(sec->dim() == 7);
    // d(theta1) in the section basis has unit omega3^omega4 coefficient
    Form dth1 = sec->d_basis(1);
    CHECK((dth1.coefficient({5, 6}) - ScalarExpr(s.pc, 1)).is_zero() == ZeroTest::Zero);
    // transporting a section form gives the corresponding basis covector
    Form w2 = s.P->to_basis(s.f.section.omega[1], sec, from_old);
    CHECK((w2 - sec->covector(4)).is_zero());
}
