#include "eds/fixtures.hpp"

namespace eds {

namespace {

ScalarExpr S(const Ctx& c, const std::string& n) { return ScalarExpr::symbol(c, n); }
ScalarExpr N(const Ctx& c, long long v) { return ScalarExpr(c, v); }
ScalarExpr half(const Ctx& c) { return ScalarExpr(c, Rational(1, 2)); }

const std::vector<std::string> kConstants{"c1", "c2", "c3", "c4",
                                           "c5", "c6", "c7", "c8"};

} // namespace

ScalarExpr Fixture::c(int i) const { return S(bt.P->ctx(), "c" + std::to_string(i)); }
ScalarExpr Fixture::m1_c(int i) const { return S(bt.I1.algebra()->ctx(), "c" + std::to_string(i)); }

// ---------------------------------------------------------------------------
// frame algebras
// ---------------------------------------------------------------------------

AlgPtr euclidean_frame_algebra(const Ctx& ctx, const std::string& sfx) {
    auto n = [&](const char* b) { return b + sfx; };
    AlgPtr a = Algebra::abstract(
        ctx, {n("eta1"), n("eta2"), n("eta3"), n("eta12"), n("eta13"), n("eta23")});
    Form e1 = a->covector(0), e2 = a->covector(1), e3 = a->covector(2);
    Form e12 = a->covector(3), e13 = a->covector(4), e23 = a->covector(5);
    a->set_structure(n("eta1"), -wedge(e12, e2) - wedge(e13, e3));
    a->set_structure(n("eta2"), wedge(e12, e1) - wedge(e23, e3));
    a->set_structure(n("eta3"), wedge(e13, e1) + wedge(e23, e2));
    a->set_structure(n("eta12"), wedge(e13, e23));
    a->set_structure(n("eta13"), -wedge(e12, e23));
    a->set_structure(n("eta23"), wedge(e12, e13));
    a->seal();
    return a;
}

AlgPtr h21_frame_algebra(const Ctx& ctx, const std::string& sfx) {
    auto n = [&](const char* b) { return b + sfx; };
    AlgPtr a = Algebra::abstract(
        ctx, {n("eta1"), n("eta2"), n("eta3"), n("eta12"), n("eta13"), n("eta23")});
    Form e1 = a->covector(0), e2 = a->covector(1), e3 = a->covector(2);
    Form e12 = a->covector(3), e13 = a->covector(4), e23 = a->covector(5);
    // eta^2_1 = eta^1_2, eta^3_1 = -eta^1_3, eta^3_2 = eta^2_3;
    // eta^0_1 = eta^1, eta^0_2 = -eta^2, eta^0_3 = eta^3
    a->set_structure(n("eta1"), -wedge(e12, e2) - wedge(e13, e3));
    a->set_structure(n("eta2"), -wedge(e12, e1) - wedge(e23, e3));
    a->set_structure(n("eta3"), wedge(e13, e1) - wedge(e23, e2));
    a->set_structure(n("eta12"), -wedge(e13, e23) + wedge(e1, e2));
    a->set_structure(n("eta13"), -wedge(e12, e23) - wedge(e1, e3));
    a->set_structure(n("eta23"), -wedge(e12, e13) - wedge(e2, e3));
    a->seal();
    return a;
}

// ---------------------------------------------------------------------------
// sine-Gordon
// ---------------------------------------------------------------------------

static Fixture build_sine_gordon() {
    Fixture f;
    f.name = "sine_gordon";

    // side 1
    Ctx m1 = ScalarContext::create();
    AlgPtr M1 = Algebra::coordinate_chart(m1, {"x", "y", "z", "p", "q"}, kConstants);
    {
        ScalarExpr z = S(m1, "z"), p = S(m1, "p"), q = S(m1, "q");
        Form th = M1->covector("dz") - M1->covector("dx") * p - M1->covector("dy") * q;
        Form psi = wedge(M1->covector("dp") - M1->covector("dy") * (half(m1) * sin(N(m1, 2) * z)),
                         M1->covector("dx"));
        Form other = wedge(M1->covector("dq") - M1->covector("dx") * (half(m1) * sin(N(m1, 2) * z)),
                           M1->covector("dy"));
        f.bt.I1 = MongeAmpereSystem(M1, th, psi, {}, psi - other);
    }

    // side 2 (barred copy)
    Ctx m2 = ScalarContext::create();
    AlgPtr M2 = Algebra::coordinate_chart(m2, {"xb", "yb", "zb", "pb", "qb"}, kConstants);
    {
        ScalarExpr zb = S(m2, "zb"), pb = S(m2, "pb"), qb = S(m2, "qb");
        Form th = M2->covector("dzb") - M2->covector("dxb") * pb - M2->covector("dyb") * qb;
        Form psi =
            wedge(M2->covector("dpb") - M2->covector("dyb") * (half(m2) * sin(N(m2, 2) * zb)),
                  M2->covector("dxb"));
        Form other =
            wedge(M2->covector("dqb") - M2->covector("dxb") * (half(m2) * sin(N(m2, 2) * zb)),
                  M2->covector("dyb"));
        f.bt.I2 = MongeAmpereSystem(M2, th, psi, {}, psi - other);
    }

    // total space: coordinates x, y, z, zb, pb, q and the parameter lam
    Ctx pc = ScalarContext::create();
    AlgPtr P = Algebra::coordinate_chart(pc, {"x", "y", "z", "zb", "pb", "q", "lam"}, kConstants);
    ScalarExpr x = S(pc, "x"), y = S(pc, "y"), z = S(pc, "z"), zb = S(pc, "zb");
    ScalarExpr pb = S(pc, "pb"), q = S(pc, "q"), lam = S(pc, "lam");
    pc->registry().assume(lam, Pred::Nonzero);

    ScalarExpr p_expr = pb + lam * sin(z + zb);
    ScalarExpr qb_expr = -q + sin(z - zb) / lam;

    f.bt.P = P;
    f.bt.pi1 = SmoothMap::coordinate(P, M1, {{"x", x}, {"y", y}, {"z", z}, {"p", p_expr}, {"q", q}});
    f.bt.pi2 = SmoothMap::coordinate(
        P, M2, {{"xb", x}, {"yb", y}, {"zb", zb}, {"pb", pb}, {"qb", qb_expr}});

    Form dx = P->covector("dx"), dy = P->covector("dy"), dlam = P->covector("dlam");
    f.bt.zeta = dlam * (N(pc, 1) / lam);
    f.section.zeta = f.bt.zeta;
    f.section.theta1 = P->covector("dz") - dx * p_expr - dy * q;
    f.section.theta2 = P->covector("dzb") - dx * pb - dy * qb_expr;
    f.section.omega[0] = dx;
    f.section.omega[1] = P->covector("dpb") - dy * (half(pc) * sin(N(pc, 2) * zb)) +
                         (f.section.zeta * sin(z + zb) + f.section.theta2 * cos(z + zb)) * lam;
    f.section.omega[2] = dy;
    f.section.omega[3] =
        P->covector("dq") - dx * (half(pc) * sin(N(pc, 2) * z)) +
        (f.section.zeta * sin(z - zb) - f.section.theta1 * cos(z - zb)) * (N(pc, 1) / lam);

    TorsionTable t;
    t.ctx = pc;
    t.A1 = N(pc, 1);
    t.A2 = N(pc, -1);
    ScalarExpr zero = N(pc, 0);
    t.B = {zero, -lam * sin(z + zb), zero, sin(z - zb) / lam};
    t.C = {zero, -lam * cos(z + zb), zero, -cos(z - zb) / lam};
    t.D = {lam * sin(z + zb), zero, sin(z - zb) / lam, zero};
    t.E = {zero, -lam * cos(z + zb), zero, cos(z - zb) / lam};
    t.F1 = zero;
    t.F2 = zero;
    f.expected_torsion = t;

    // the unique field covering the Lie-transformation generators on both sides
    f.fields["w"] = VectorField{
        P,
        {{P->basis_index("dx"), x},
         {P->basis_index("dy"), -y},
         {P->basis_index("dpb"), -pb},
         {P->basis_index("dq"), q},
         {P->basis_index("dlam"), -lam}}};
    {
        ScalarExpr mx = S(m1, "x"), my = S(m1, "y"), mp = S(m1, "p"), mq = S(m1, "q");
        f.side_fields["v"] = VectorField{M1,
                                         {{M1->basis_index("dx"), mx},
                                          {M1->basis_index("dy"), -my},
                                          {M1->basis_index("dp"), -mp},
                                          {M1->basis_index("dq"), mq}}};
        ScalarExpr bx = S(m2, "xb"), by = S(m2, "yb"), bp = S(m2, "pb"), bq = S(m2, "qb");
        f.side_fields["vbar"] = VectorField{M2,
                                            {{M2->basis_index("dxb"), bx},
                                             {M2->basis_index("dyb"), -by},
                                             {M2->basis_index("dpb"), -bp},
                                             {M2->basis_index("dqb"), bq}}};
    }
    return f;
}

// ---------------------------------------------------------------------------
// Goursat / wave
// ---------------------------------------------------------------------------

static Fixture build_goursat() {
    Fixture f;
    f.name = "goursat";

    Ctx m1 = ScalarContext::create();
    AlgPtr M1 = Algebra::coordinate_chart(m1, {"x", "y", "w", "p", "q"}, kConstants);
    {
        ScalarExpr x = S(m1, "x"), y = S(m1, "y"), p = S(m1, "p"), q = S(m1, "q");
        m1->registry().assume(p, Pred::Positive);
        m1->registry().assume(q, Pred::Positive);
        m1->registry().assume(x + y, Pred::Positive);
        ScalarExpr fcoef = sqrt(N(m1, 2) * p) * sqrt(N(m1, 2) * q) / (x + y);
        Form th = M1->covector("dw") - M1->covector("dx") * p - M1->covector("dy") * q;
        Form psi = wedge(M1->covector("dp") + M1->covector("dy") * fcoef, M1->covector("dx"));
        f.bt.I1 = MongeAmpereSystem(M1, th, psi);
    }

    Ctx m2 = ScalarContext::create();
    AlgPtr M2 = Algebra::coordinate_chart(m2, {"xb", "yb", "u", "pb", "qb"}, kConstants);
    {
        ScalarExpr pb = S(m2, "pb"), qb = S(m2, "qb");
        Form th = M2->covector("du") - M2->covector("dxb") * pb - M2->covector("dyb") * qb;
        Form psi = wedge(M2->covector("dpb"), M2->covector("dxb"));
        Form other = wedge(M2->covector("dqb"), M2->covector("dyb"));
        f.bt.I2 = MongeAmpereSystem(M2, th, psi, {}, psi - other);
    }

    Ctx pc = ScalarContext::create();
    AlgPtr P = Algebra::coordinate_chart(pc, {"x", "y", "w", "p", "q", "u", "t"}, kConstants);
    ScalarExpr x = S(pc, "x"), y = S(pc, "y"), p = S(pc, "p"), q = S(pc, "q");
    ScalarExpr u = S(pc, "u"), t = S(pc, "t");
    pc->registry().assume(p, Pred::Positive);
    pc->registry().assume(q, Pred::Positive);
    pc->registry().assume(x + y, Pred::Positive);
    ScalarExpr one = N(pc, 1);
    ScalarExpr mx = one - t * x, py = one + t * y;
    pc->registry().assume(mx, Pred::Positive);
    pc->registry().assume(py, Pred::Positive);
    ScalarExpr r2p = sqrt(N(pc, 2) * p), r2q = sqrt(N(pc, 2) * q);
    pc->registry().assume((r2p / r2q) * (mx / py) - one, Pred::Nonzero); // A1 A2 != 1

    ScalarExpr pb_expr = (u * py / (x + y) + r2p) / mx;
    ScalarExpr qb_expr = (u * mx / (x + y) + r2q) / py;

    f.bt.P = P;
    f.bt.pi1 = SmoothMap::coordinate(
        P, M1, {{"x", x}, {"y", y}, {"w", S(pc, "w")}, {"p", p}, {"q", q}});
    f.bt.pi2 = SmoothMap::coordinate(
        P, M2, {{"xb", x}, {"yb", y}, {"u", u}, {"pb", pb_expr}, {"qb", qb_expr}});

    Form dx = P->covector("dx"), dy = P->covector("dy"), dt = P->covector("dt");
    f.bt.zeta = dt * (one / (mx * py));
    f.section.zeta = f.bt.zeta;
    f.section.theta1 =
        (P->covector("dw") - dx * p - dy * q) * (one / r2q);
    f.section.theta2 = (P->covector("du") - dx * pb_expr - dy * qb_expr) * mx;
    f.section.omega[0] = dx;
    f.section.omega[1] = P->covector("dp") * (one / r2p) + dy * (r2q / (x + y));
    f.section.omega[2] = dy;
    f.section.omega[3] = P->covector("dq") * (one / r2q) + dx * (r2p / (x + y)) -
                         dt * ((u + y * r2q) / py);

    TorsionTable tt;
    tt.ctx = pc;
    ScalarExpr zero = N(pc, 0);
    tt.A1 = r2p / r2q;
    tt.A2 = mx / py;
    tt.B = {zero, zero, zero, zero};
    tt.C = {zero, -one / (x + y), zero, -one / (x + y)};
    tt.D = {-py * (u + x * r2p), zero, -mx * (u + y * r2q), zero};
    tt.E = {zero, zero, zero, one};
    f.expected_torsion = tt;
    f.expect_F_nonzero = true;

    f.fields["w"] = VectorField{P,
                                {{P->basis_index("dx"), x * x},
                                 {P->basis_index("dy"), -y * y},
                                 {P->basis_index("dp"), N(pc, -2) * x * p},
                                 {P->basis_index("dq"), N(pc, 2) * y * q},
                                 {P->basis_index("dt"), -one}}};
    {
        ScalarExpr gx = S(m1, "x"), gy = S(m1, "y"), gp = S(m1, "p"), gq = S(m1, "q");
        f.side_fields["v"] = VectorField{M1,
                                         {{M1->basis_index("dx"), gx * gx},
                                          {M1->basis_index("dy"), -gy * gy},
                                          {M1->basis_index("dp"), N(m1, -2) * gx * gp},
                                          {M1->basis_index("dq"), N(m1, 2) * gy * gq}}};
    }
    return f;
}

// ---------------------------------------------------------------------------
// pseudospherical surfaces
// ---------------------------------------------------------------------------

static Fixture build_pseudospherical() {
    Fixture f;
    f.name = "pseudospherical";

    Ctx pc = ScalarContext::create();
    for (const auto& cn : kConstants) pc->add_symbol(cn);
    pc->add_symbol("psi");
    AlgPtr P = Algebra::abstract(
        pc, {"eta1", "eta2", "eta3", "eta12", "eta13", "eta23", "dpsi"});
    Form e1 = P->covector(0), e2 = P->covector(1), e3 = P->covector(2);
    Form e12 = P->covector(3), e13 = P->covector(4), e23 = P->covector(5);
    Form dpsi = P->covector(6);
    P->set_structure("eta1", -wedge(e12, e2) - wedge(e13, e3));
    P->set_structure("eta2", wedge(e12, e1) - wedge(e23, e3));
    P->set_structure("eta3", wedge(e13, e1) + wedge(e23, e2));
    P->set_structure("eta12", wedge(e13, e23));
    P->set_structure("eta13", -wedge(e12, e23));
    P->set_structure("eta23", wedge(e12, e13));
    P->set_structure("dpsi", Form(P));
    P->set_scalar_differential("psi", dpsi);
    for (const auto& cn : kConstants) P->set_scalar_differential(cn, Form(P));
    P->seal();

    ScalarExpr psi = S(pc, "psi"), one = N(pc, 1);
    // the angle stays in (0, pi): the operative certificates
    pc->registry().assume(sin(psi), Pred::Positive);
    pc->registry().assume(one - cos(psi), Pred::Positive);
    pc->registry().assume(one + cos(psi), Pred::Positive);
    ScalarExpr lam = sin(psi);

    // barred coframe on P from the correspondence relations
    Form be1 = e1 + dpsi * cos(psi);
    Form be2 = (e2 - e12 * lam) * cos(psi) + (e3 - e13 * lam) * sin(psi);
    Form be3 = (e2 - e12 * lam) * (-sin(psi)) + (e3 - e13 * lam) * cos(psi);
    Form be12 = e12 * cos(psi) + e13 * sin(psi);
    Form be13 = e12 * (-sin(psi)) + e13 * cos(psi);
    Form be23 = e23 - dpsi;

    Ctx m1 = ScalarContext::create();
    for (const auto& cn : kConstants) m1->add_symbol(cn);
    AlgPtr M1 = euclidean_frame_algebra(m1);
    {
        Form psi_form = wedge(M1->covector("eta13"), M1->covector("eta23")) +
                        wedge(M1->covector("eta1"), M1->covector("eta2"));
        f.bt.I1 = MongeAmpereSystem(M1, M1->covector("eta3"), psi_form,
                                    {M1->basis_index("eta12")});
    }
    Ctx m2 = ScalarContext::create();
    for (const auto& cn : kConstants) m2->add_symbol(cn);
    AlgPtr M2 = euclidean_frame_algebra(m2, "b");
    {
        Form psi_form = wedge(M2->covector("eta13b"), M2->covector("eta23b")) +
                        wedge(M2->covector("eta1b"), M2->covector("eta2b"));
        f.bt.I2 = MongeAmpereSystem(M2, M2->covector("eta3b"), psi_form,
                                    {M2->basis_index("eta12b")});
    }

    f.bt.P = P;
    f.bt.pi1 = SmoothMap::abstract(P, M1,
                                   {{"eta1", e1},
                                    {"eta2", e2},
                                    {"eta3", e3},
                                    {"eta12", e12},
                                    {"eta13", e13},
                                    {"eta23", e23}},
                                   {});
    f.bt.pi2 = SmoothMap::abstract(P, M2,
                                   {{"eta1b", be1},
                                    {"eta2b", be2},
                                    {"eta3b", be3},
                                    {"eta12b", be12},
                                    {"eta13b", be13},
                                    {"eta23b", be23}},
                                   {});

    f.bt.zeta = dpsi;
    f.section.zeta = dpsi;
    f.section.theta1 = e3 * N(pc, 2);
    f.section.theta2 = be3 * N(pc, 2);
    f.section.omega[0] = e1 - e23;
    f.section.omega[1] = e2 + e13 - e3 * ((one + cos(psi)) / sin(psi));
    f.section.omega[2] = be1 + be23;
    f.section.omega[3] = e2 - e13 + e3 * ((one - cos(psi)) / sin(psi));

    TorsionTable t;
    t.ctx = pc;
    ScalarExpr zero = N(pc, 0);
    ScalarExpr m4 = N(pc, 4) * (one - cos(psi));
    ScalarExpr p4 = N(pc, 4) * (one + cos(psi));
    t.A1 = N(pc, -1);
    t.A2 = one;
    t.B = {(one / sin(psi)) / m4, zero, -(one / sin(psi)) / p4, zero};
    // the C4 sign follows from the coframe's own congruences (the zeta ^
    // omega^2 coefficient of d(omega^4) carries C4 D2 and fixes it)
    t.C = {zero, N(pc, -2) * sin(psi) / m4, zero, N(pc, -2) * sin(psi) / p4};
    t.D = {zero, one + cos(psi), zero, one - cos(psi)};
    t.E = {zero, N(pc, 2) / m4, zero, N(pc, -2) / p4};
    f.expected_torsion = t; // F values only known to be nonzero
    f.expect_F_nonzero = true;
    f.expected_torsion->F1 = ScalarExpr();
    f.expected_torsion->F2 = ScalarExpr();
    return f;
}

// ---------------------------------------------------------------------------
// timelike CMC surfaces in H^{2,1}
// ---------------------------------------------------------------------------

static Fixture build_cmc() {
    Fixture f;
    f.name = "cmc";

    Ctx pc = ScalarContext::create();
    for (const auto& cn : kConstants) pc->add_symbol(cn);
    pc->add_symbol("r");
    pc->add_symbol("lam");
    AlgPtr P = Algebra::abstract(pc, {"eta1", "eta2", "eta3", "eta12", "eta13", "eta23", "dr"});
    Form e1 = P->covector(0), e2 = P->covector(1), e3 = P->covector(2);
    Form e12 = P->covector(3), e13 = P->covector(4), e23 = P->covector(5);
    Form dr = P->covector(6);
    P->set_structure("eta1", -wedge(e12, e2) - wedge(e13, e3));
    P->set_structure("eta2", -wedge(e12, e1) - wedge(e23, e3));
    P->set_structure("eta3", wedge(e13, e1) - wedge(e23, e2));
    P->set_structure("eta12", -wedge(e13, e23) + wedge(e1, e2));
    P->set_structure("eta13", -wedge(e12, e23) - wedge(e1, e3));
    P->set_structure("eta23", -wedge(e12, e13) - wedge(e2, e3));
    P->set_structure("dr", Form(P));
    ScalarExpr lam = S(pc, "lam"), one = N(pc, 1);
    P->set_scalar_differential("r", dr);
    P->set_scalar_differential("lam", dr * (N(pc, 2) * lam)); // lam = e^{2r}
    for (const auto& cn : kConstants) P->set_scalar_differential(cn, Form(P));
    P->seal();
    pc->registry().assume(lam, Pred::Positive);
    pc->registry().assume(lam - one, Pred::Nonzero);

    // barred coframe from the differentiated correspondence relations
    Form s1 = ((e3 - e2) * (one + lam) + (e12 + e13) * (one - lam)) * (one / lam);
    Form t1 = ((e3 - e2) * (one - lam) + (e12 + e13) * (one + lam)) * (one / lam);
    Form s2 = ((e1 - e2) * (one + lam) + (e23 - e13) * (one - lam)) * ScalarExpr(pc, Rational(1, 4));
    Form t2 = ((e1 - e2) * (one - lam) + (e23 - e13) * (one + lam)) * ScalarExpr(pc, Rational(1, 4));
    Form s3 = e1 + e3 - e2 + dr;
    Form t3 = -(e12 + e13 - e23 + dr);
    Form be3 = s3 - s1, be1 = s3 - s2, be2 = s3 - s1 - s2;
    Form be23 = t2 - t3, be13 = t2 - t3 - t1, be12 = t3 + t1;

    Ctx m1 = ScalarContext::create();
    for (const auto& cn : kConstants) m1->add_symbol(cn);
    AlgPtr M1 = h21_frame_algebra(m1);
    {
        Form psi_form = wedge(M1->covector("eta13"), M1->covector("eta2")) -
                        wedge(M1->covector("eta23"), M1->covector("eta1")) +
                        wedge(M1->covector("eta1"), M1->covector("eta2")) * N(m1, 2);
        f.bt.I1 = MongeAmpereSystem(M1, M1->covector("eta3"), psi_form,
                                    {M1->basis_index("eta12")});
    }
    Ctx m2 = ScalarContext::create();
    for (const auto& cn : kConstants) m2->add_symbol(cn);
    AlgPtr M2 = h21_frame_algebra(m2, "b");
    {
        // the transformed surface carries the opposite mean curvature sign
        // relative to its induced normal, so the second system has H = -1
        Form psi_form = wedge(M2->covector("eta13b"), M2->covector("eta2b")) -
                        wedge(M2->covector("eta23b"), M2->covector("eta1b")) -
                        wedge(M2->covector("eta1b"), M2->covector("eta2b")) * N(m2, 2);
        f.bt.I2 = MongeAmpereSystem(M2, M2->covector("eta3b"), psi_form,
                                    {M2->basis_index("eta12b")});
    }

    f.bt.P = P;
    f.bt.pi1 = SmoothMap::abstract(P, M1,
                                   {{"eta1", e1},
                                    {"eta2", e2},
                                    {"eta3", e3},
                                    {"eta12", e12},
                                    {"eta13", e13},
                                    {"eta23", e23}},
                                   {});
    f.bt.pi2 = SmoothMap::abstract(P, M2,
                                   {{"eta1b", be1},
                                    {"eta2b", be2},
                                    {"eta3b", be3},
                                    {"eta12b", be12},
                                    {"eta13b", be13},
                                    {"eta23b", be23}},
                                   {});

    f.bt.zeta = dr;
    f.section.zeta = dr;
    f.section.theta1 = e3 * N(pc, 2);
    f.section.theta2 = be3 * N(pc, 2);
    f.section.omega[0] = e1 - e2 + e3;
    f.section.omega[1] = e23 + e2 + e13 + e1;
    f.section.omega[2] = e1 + e2 - e3 + dr;
    f.section.omega[3] = e23 - e13 - e1 + e2 + (e3 + dr) * (N(pc, 2) / (lam - one));

    TorsionTable t;
    t.ctx = pc;
    ScalarExpr zero = N(pc, 0);
    ScalarExpr d4 = N(pc, 4) * (lam - one);
    t.A1 = N(pc, -1);
    t.A2 = one;
    t.B = {lam / d4, zero, lam / d4, N(pc, 2) * lam / (d4 * (lam - one))};
    t.C = {half(pc), zero, half(pc), -one / (lam - one)};
    t.D = {zero, one, N(pc, 2) / (lam - one), -one};
    t.E = {N(pc, 2) * lam / d4, zero, N(pc, -2) * lam / d4,
           N(pc, 4) * lam / (d4 * (lam - one))};
    t.F1 = N(pc, 2) / (lam - one);
    t.F2 = zero;
    f.expected_torsion = t;
    return f;
}

// ---------------------------------------------------------------------------
// wave equation pair (flat case; identity correspondence is degenerate)
// ---------------------------------------------------------------------------

static Fixture build_wave_pair() {
    Fixture f;
    f.name = "wave_pair";

    Ctx m1 = ScalarContext::create();
    AlgPtr M1 = Algebra::coordinate_chart(m1, {"x", "y", "u", "p", "q"}, kConstants);
    {
        ScalarExpr p = S(m1, "p"), q = S(m1, "q");
        Form th = M1->covector("du") - M1->covector("dx") * p - M1->covector("dy") * q;
        Form psi = wedge(M1->covector("dp"), M1->covector("dx"));
        Form other = wedge(M1->covector("dq"), M1->covector("dy"));
        f.bt.I1 = MongeAmpereSystem(M1, th, psi, {}, psi - other);
    }
    Ctx m2 = ScalarContext::create();
    AlgPtr M2 = Algebra::coordinate_chart(m2, {"xb", "yb", "ub", "pb", "qb"}, kConstants);
    {
        ScalarExpr pb = S(m2, "pb"), qb = S(m2, "qb");
        Form th = M2->covector("dub") - M2->covector("dxb") * pb - M2->covector("dyb") * qb;
        Form psi = wedge(M2->covector("dpb"), M2->covector("dxb"));
        Form other = wedge(M2->covector("dqb"), M2->covector("dyb"));
        f.bt.I2 = MongeAmpereSystem(M2, th, psi, {}, psi - other);
    }

    // diagonal correspondence (degenerate: fails the Backlund condition)
    Ctx bc = ScalarContext::create();
    AlgPtr B = Algebra::coordinate_chart(bc, {"x", "y", "u", "p", "q"}, kConstants);
    f.bt.P = B;
    std::map<std::string, ScalarExpr> id1{{"x", S(bc, "x")},
                                          {"y", S(bc, "y")},
                                          {"u", S(bc, "u")},
                                          {"p", S(bc, "p")},
                                          {"q", S(bc, "q")}};
    f.bt.pi1 = SmoothMap::coordinate(B, M1, id1);
    f.bt.pi2 = SmoothMap::coordinate(B, M2,
                                     {{"xb", S(bc, "x")},
                                      {"yb", S(bc, "y")},
                                      {"ub", S(bc, "u")},
                                      {"pb", S(bc, "p")},
                                      {"qb", S(bc, "q")}});
    return f;
}

// ---------------------------------------------------------------------------
// composed wave-to-wave transformation (all B- and C-vectors vanish)
// ---------------------------------------------------------------------------

static Fixture build_zutrans() {
    Fixture f;
    f.name = "zutrans";

    Ctx m1 = ScalarContext::create();
    AlgPtr M1 = Algebra::coordinate_chart(m1, {"x", "y", "z", "p", "q"}, kConstants);
    {
        ScalarExpr p = S(m1, "p"), q = S(m1, "q");
        Form th = M1->covector("dz") - M1->covector("dx") * p - M1->covector("dy") * q;
        Form psi = wedge(M1->covector("dp"), M1->covector("dx"));
        Form other = wedge(M1->covector("dq"), M1->covector("dy"));
        f.bt.I1 = MongeAmpereSystem(M1, th, psi, {}, psi - other);
    }
    Ctx m2 = ScalarContext::create();
    AlgPtr M2 = Algebra::coordinate_chart(m2, {"xb", "yb", "ub", "pb", "qb"}, kConstants);
    {
        ScalarExpr pb = S(m2, "pb"), qb = S(m2, "qb");
        Form th = M2->covector("dub") - M2->covector("dxb") * pb - M2->covector("dyb") * qb;
        Form psi = wedge(M2->covector("dpb"), M2->covector("dxb"));
        Form other = wedge(M2->covector("dqb"), M2->covector("dyb"));
        f.bt.I2 = MongeAmpereSystem(M2, th, psi, {}, psi - other);
    }

    // z_x = p^2/2, z_y = q^2/2 in the barred first derivatives; a dummy
    // parameter direction makes the 7-dimensional picture degenerate
    Ctx pc = ScalarContext::create();
    AlgPtr P = Algebra::coordinate_chart(pc, {"x", "y", "z", "u", "pb", "qb", "t"}, kConstants);
    ScalarExpr pb = S(pc, "pb"), qb = S(pc, "qb"), one = N(pc, 1);
    pc->registry().assume(pb, Pred::Nonzero);
    pc->registry().assume(qb, Pred::Nonzero);
    pc->registry().assume(pb - qb, Pred::Nonzero);
    ScalarExpr p_expr = half(pc) * pb * pb, q_expr = half(pc) * qb * qb;

    f.bt.P = P;
    f.bt.pi1 = SmoothMap::coordinate(P, M1,
                                     {{"x", S(pc, "x")},
                                      {"y", S(pc, "y")},
                                      {"z", S(pc, "z")},
                                      {"p", p_expr},
                                      {"q", q_expr}});
    f.bt.pi2 = SmoothMap::coordinate(P, M2,
                                     {{"xb", S(pc, "x")},
                                      {"yb", S(pc, "y")},
                                      {"ub", S(pc, "u")},
                                      {"pb", pb},
                                      {"qb", qb}});

    Form dx = P->covector("dx"), dy = P->covector("dy");
    f.bt.zeta = P->covector("dt");
    f.section.zeta = f.bt.zeta;
    f.section.theta1 = (P->covector("dz") - dx * p_expr - dy * q_expr) * (one / qb);
    f.section.theta2 = P->covector("du") - dx * pb - dy * qb;
    f.section.omega[0] = dx;
    f.section.omega[1] = P->covector("dpb");
    f.section.omega[2] = dy;
    f.section.omega[3] = P->covector("dqb");

    TorsionTable t;
    t.ctx = pc;
    ScalarExpr zero = N(pc, 0);
    t.A1 = pb / qb;
    t.A2 = one;
    t.B = {zero, zero, zero, zero};
    t.C = {zero, zero, zero, zero};
    t.D = {zero, zero, zero, zero};
    t.E = {zero, zero, zero, zero};
    t.F1 = zero;
    t.F2 = zero;
    f.expected_torsion = t;
    return f;
}

Fixture build_fixture(const std::string& name) {
    if (name == "sine_gordon") return build_sine_gordon();
    if (name == "goursat") return build_goursat();
    if (name == "pseudospherical") return build_pseudospherical();
    if (name == "cmc") return build_cmc();
    if (name == "wave_pair") return build_wave_pair();
    if (name == "zutrans") return build_zutrans();
    throw ConstructionError("unknown fixture: " + name);
}

} // namespace eds
