#include "eds/claws.hpp"

#include <algorithm>

#include "eds/linalg.hpp"

namespace eds {

namespace {

constexpr int Z = 0, T1 = 1, T2 = 2, W1 = 3;

// leading direction of theta (lowest certified-nonzero coefficient)
int theta_leading(const MongeAmpereSystem& s) {
    for (int i = 0; i < s.algebra()->dim(); ++i)
        if (s.theta().coefficient({i}).is_zero() == ZeroTest::NonzeroByAssumption) return i;
    throw UnknownPivot("contact form has no certified leading coefficient");
}

Form drop_dirs(const Form& f, std::initializer_list<int> dirs) {
    Form r(f.algebra());
    for (const auto& [idx, c] : f.terms()) {
        bool hit = false;
        for (int d : dirs)
            if (std::find(idx.begin(), idx.end(), d) != idx.end()) hit = true;
        if (!hit) r.add(idx, c);
    }
    return r;
}

} // namespace

Form ma_claw_form(const MongeAmpereSystem& s, const ScalarExpr& Q, const Form& gamma) {
    return s.claw_form() * Q + wedge(s.theta(), gamma);
}

Form solve_gamma(const MongeAmpereSystem& s, const ScalarExpr& Q) {
    const AlgPtr& alg = s.algebra();
    const Ctx& ctx = alg->ctx();
    int lead = theta_leading(s);
    std::vector<int> support;
    for (int i = 0; i < alg->dim(); ++i)
        if (i != lead) support.push_back(i);

    // d(Q claw + theta ^ gamma) == 0 mod theta, with gamma = sum g_i e^i:
    // dQ ^ claw + Q d(claw) + dtheta ^ gamma == 0 mod theta
    Form known = alg->d(s.claw_form() * Q);
    std::vector<Form> columns;
    for (int i : support) columns.push_back(reduce_mod(wedge(s.Theta(), alg->covector(i)), {s.theta()}));
    Form rhs = -reduce_mod(known, {s.theta()});

    std::vector<std::vector<int>> monos;
    std::vector<Form> all = columns;
    all.push_back(rhs);
    Matrix m = forms_coefficient_matrix(all, &monos);
    int n = static_cast<int>(support.size());
    Matrix sys(monos.size(), Vec(n));
    Vec b(monos.size());
    for (size_t j = 0; j < monos.size(); ++j) {
        for (int i = 0; i < n; ++i) sys[j][i] = m[i][j];
        b[j] = m[n][j];
    }
    auto x = solve_linear(sys, b, ctx);
    if (!x) throw NoSolution("no gamma solves the closedness congruence");
    Form gamma(alg);
    for (int i = 0; i < n; ++i) gamma.add({support[i]}, (*x)[i]);
    return gamma;
}

bool verify_closed_ma(const MongeAmpereSystem& s, const ScalarExpr& Q, const Form& gamma) {
    return s.algebra()->d(ma_claw_form(s, Q, gamma)).is_zero();
}

// ---------------------------------------------------------------------------
// J-claws
// ---------------------------------------------------------------------------

JClawSpace jclaw_space(const ParametricBT& bt, const SectionCoframe& cf) {
    JClawSpace js;
    js.bt = on_section_basis(bt, cf, &js.cf);
    // torsion of the identity coframe on the section presentation
    js.torsion = extract_torsion(js.bt, js.cf);
    return js;
}

Form jclaw_form(const JClawSpace& js, const JClaw& c) {
    const AlgPtr& S = js.bt.P;
    Form g1(S), g2(S);
    for (int i = 0; i < 4; ++i) {
        g1.add({W1 + i}, c.P[i]);
        g2.add({W1 + i}, c.Q[i]);
    }
    Form phi = wedge(S->covector(T1), g1) + wedge(S->covector(T2), g2);
    Form tt(S);
    tt.add({T1, T2}, c.R);
    return phi + tt;
}

bool verify_closed_j(const JClawSpace& js, const JClaw& c) {
    Form dphi = js.bt.P->d(jclaw_form(js, c));
    return drop_dirs(dphi, {Z}).is_zero();
}

JClawRelations jclaw_symmetry_relations(const JClawSpace& js) {
    const AlgPtr& S = js.bt.P;
    const Ctx& ctx = S->ctx();
    // d Phi mod {zeta, theta1, theta2} kills every derivative of the unknown
    // coefficients; what is left is linear algebra on P_i, Q_i
    std::vector<Form> dth{drop_dirs(S->d_basis(T1), {Z, T1, T2}),
                          drop_dirs(S->d_basis(T2), {Z, T1, T2})};
    // equations: coefficients of dth[0] ^ w^i P_i + dth[1] ^ w^i Q_i
    std::vector<Form> cols;
    for (int i = 0; i < 4; ++i) cols.push_back(wedge(dth[0], S->covector(W1 + i)));
    for (int i = 0; i < 4; ++i) cols.push_back(wedge(dth[1], S->covector(W1 + i)));
    std::vector<std::vector<int>> monos;
    Matrix m = forms_coefficient_matrix(cols, &monos);
    // solve for Q in terms of P: unknowns Q_i (columns 4..7)
    Matrix sys(monos.size(), Vec(4));
    for (size_t j = 0; j < monos.size(); ++j)
        for (int i = 0; i < 4; ++i) sys[j][i] = m[4 + i][j];
    JClawRelations rel;
    for (int k = 0; k < 4; ++k) {
        Vec b(monos.size());
        for (size_t j = 0; j < monos.size(); ++j) b[j] = -m[k][j];
        auto x = solve_linear(sys, b, ctx);
        if (!x) throw NoSolution("closedness mod theta has no Q solution");
        // Q = x when P = e_k: record the coefficient on the diagonal and
        // require the rest to vanish (the relations decouple pairwise)
        for (int i = 0; i < 4; ++i) {
            if (i == k) {
                rel.q_coeff[k] = (*x)[i];
            } else if (!(*x)[i].is_zero_canonical()) {
                throw NoSolution("coupled Q relations");
            }
        }
    }

    // forced R: assemble d Phi with unknown coefficient differentials and a
    // symbolic R, then eliminate; unknown symbols are plain (never pushed
    // through the algebra's d)
    Ctx c = ctx;
    std::vector<int> unknown_syms;
    auto fresh = [&](const std::string& n) {
        if (!c->find_symbol(n)) c->add_symbol(n);
        return ScalarExpr::symbol(c, n);
    };
    auto fresh_unknown = [&](const std::string& n) {
        ScalarExpr e = fresh(n);
        unknown_syms.push_back(*c->find_symbol(n));
        return e;
    };
    std::array<ScalarExpr, 4> P;
    std::array<int, 4> P_syms;
    for (int i = 0; i < 4; ++i) {
        P[i] = fresh("_p" + std::to_string(i + 1));
        P_syms[i] = *c->find_symbol("_p" + std::to_string(i + 1));
    }
    ScalarExpr Rsym = fresh_unknown("_r");
    std::array<std::array<ScalarExpr, 7>, 4> dP;
    std::array<ScalarExpr, 7> dR;
    for (int i = 0; i < 4; ++i)
        for (int a = 0; a < 7; ++a)
            dP[i][a] = fresh_unknown("_u" + std::to_string(i + 1) + std::to_string(a));
    for (int a = 0; a < 7; ++a) dR[a] = fresh_unknown("_v" + std::to_string(a));

    Form dphi(S);
    for (int i = 0; i < 4; ++i) {
        ScalarExpr qi = rel.q_coeff[i];
        Form dPi(S), dQi(S);
        for (int a = 0; a < 7; ++a) dPi.add({a}, dP[i][a]);
        // dQ_i = q_i dP_i + P_i dq_i
        Form dqi(S);
        for (int sym : collect_symbols(qi)) {
            ScalarExpr pd = qi.differentiate(sym);
            if (!pd.is_zero_canonical()) dqi += S->d_symbol(sym) * pd;
        }
        dQi = dPi * qi + dqi * P[i];
        Form th1wi = wedge(S->covector(T1), S->covector(W1 + i));
        Form th2wi = wedge(S->covector(T2), S->covector(W1 + i));
        dphi += S->d(th1wi) * P[i] + wedge(dPi, th1wi);
        dphi += S->d(th2wi) * (qi * P[i]) + wedge(dQi, th2wi);
    }
    {
        Form th12 = wedge(S->covector(T1), S->covector(T2));
        Form dRf(S);
        for (int a = 0; a < 7; ++a) dRf.add({a}, dR[a]);
        dphi += S->d(th12) * Rsym + wedge(dRf, th12);
    }
    dphi = drop_dirs(dphi, {Z});

    // linear system over the unknowns; P_i stay symbolic parameters
    std::map<int, ScalarExpr> zero_map;
    for (int sym : unknown_syms) zero_map[sym] = ScalarExpr(c, 0);
    Matrix sys2;
    Vec b2;
    for (const auto& [idx, coeff] : dphi.terms()) {
        Vec row;
        for (int sym : unknown_syms) row.push_back(coeff.differentiate(sym));
        sys2.push_back(std::move(row));
        b2.push_back(-coeff.substitute(c, zero_map));
    }
    auto sol = solve_linear(sys2, b2, c);
    if (!sol) throw NoSolution("closedness does not force R");
    ScalarExpr Rvalue = (*sol)[0]; // the R unknown is pivoted first
    for (int i = 0; i < 4; ++i) rel.r_coeff[i] = Rvalue.differentiate(P_syms[i]);
    return rel;
}

JClaw normalize_jclaw(const JClawSpace& js, const Form& phi) {
    const AlgPtr& S = js.bt.P;
    const Ctx& ctx = S->ctx();
    Form resid = drop_dirs(phi, {Z, T1, T2});
    Form d1 = drop_dirs(S->d_basis(T1), {Z, T1, T2});
    Form d2 = drop_dirs(S->d_basis(T2), {Z, T1, T2});
    // resid = a d1 + b d2: coefficients on w1^w2 and w3^w4
    ScalarExpr c12 = resid.coefficient({W1, W1 + 1});
    ScalarExpr c34 = resid.coefficient({W1 + 2, W1 + 3});
    ScalarExpr A1 = js.torsion.A1, A2 = js.torsion.A2;
    ScalarExpr det = A1 * A2 - ScalarExpr(ctx, 1);
    ScalarExpr a = (c12 * A2 - c34) / det;
    ScalarExpr b = (c34 * A1 - c12) / det;
    Form check = resid - d1 * a - d2 * b;
    if (!check.is_zero())
        throw NormalFormFailure("pullback is not congruent to the span of d theta_i: " +
                                check.str());
    Form da(S), db(S);
    for (int sym : collect_symbols(a)) {
        ScalarExpr pd = a.differentiate(sym);
        if (!pd.is_zero_canonical()) da += S->d_symbol(sym) * pd;
    }
    for (int sym : collect_symbols(b)) {
        ScalarExpr pd = b.differentiate(sym);
        if (!pd.is_zero_canonical()) db += S->d_symbol(sym) * pd;
    }
    Form corrected = phi - S->d_basis(T1) * a - S->d_basis(T2) * b -
                     wedge(da, S->covector(T1)) - wedge(db, S->covector(T2));
    corrected = drop_dirs(corrected, {Z});
    JClaw out;
    for (int i = 0; i < 4; ++i) {
        out.P[i] = corrected.coefficient({T1, W1 + i});
        out.Q[i] = corrected.coefficient({T2, W1 + i});
    }
    out.R = corrected.coefficient({T1, T2});
    // nothing may remain outside the normal form
    Form rebuilt = jclaw_form(js, out);
    if (!(corrected - rebuilt).is_zero())
        throw NormalFormFailure("slice form does not fit the theta ^ gamma normal form: " +
                                (corrected - rebuilt).str());
    return out;
}

JClaw pullback_claw(const JClawSpace& js, int side, const ScalarExpr& Q, const Form& gamma) {
    const SmoothMap& pi = side == 1 ? js.bt.pi1 : js.bt.pi2;
    const MongeAmpereSystem& sys = side == 1 ? js.bt.I1 : js.bt.I2;
    Form phi = pi.pullback(ma_claw_form(sys, Q, gamma));
    return normalize_jclaw(js, phi);
}

} // namespace eds
