#include "eds/monge.hpp"

namespace eds {

MongeAmpereSystem::MongeAmpereSystem(AlgPtr alg, Form theta, Form psi,
                                     std::vector<int> cauchy_dirs,
                                     std::optional<Form> claw_form)
    : alg_(std::move(alg)), theta_(std::move(theta)), psi_(std::move(psi)),
      cauchy_dirs_(std::move(cauchy_dirs)) {
    Theta_ = alg_->d(theta_);
    claw_form_ = claw_form ? *claw_form : psi_;
    if (alg_->dim() != 5 + static_cast<int>(cauchy_dirs_.size()))
        throw ConstructionError("Monge-Ampere system needs 5 transverse directions");
    // contact condition theta ^ dtheta ^ dtheta != 0 (certified)
    Form vol = wedge(theta_, wedge(Theta_, Theta_));
    bool ok = false;
    for (const auto& [idx, c] : vol.terms())
        if (c.is_zero() == ZeroTest::NonzeroByAssumption) ok = true;
    if (!ok) throw ConstructionError("contact condition not certified: theta^dtheta^dtheta");
    // Psi independent from Theta and from wedges with theta
    Form tr = reduce_mod(Theta_, {theta_});
    Form pr = reduce_mod(psi_, {theta_});
    if (span_rank({tr, pr}) != 2)
        throw ConstructionError("Psi is not independent of Theta mod theta");
}

namespace {

// the three reduced products must be multiples of one 4-form monomial
struct Quadratic {
    ScalarExpr a, b, c; // a mu^2 + 2 b mu nu + c nu^2
};

Quadratic root_equation(const MongeAmpereSystem& s) {
    const Ctx& ctx = s.algebra()->ctx();
    Form tt = reduce_mod(wedge(s.Theta(), s.Theta()), {s.theta()});
    Form tp = reduce_mod(wedge(s.Theta(), s.psi()), {s.theta()});
    Form pp = reduce_mod(wedge(s.psi(), s.psi()), {s.theta()});
    std::vector<int> vol;
    for (const Form* f : {&tt, &tp, &pp}) {
        for (const auto& [idx, c] : f->terms()) {
            if (vol.empty()) vol = idx;
            else if (vol != idx)
                throw FactorizationFailure("root equation is not a scalar quadratic");
        }
    }
    Quadratic q{ScalarExpr(ctx, 0), ScalarExpr(ctx, 0), ScalarExpr(ctx, 0)};
    if (!vol.empty()) {
        q.a = tt.coefficient(vol);
        q.b = tp.coefficient(vol);
        q.c = pp.coefficient(vol);
    }
    return q;
}

std::optional<ScalarExpr> exact_sqrt(const ScalarExpr& e) {
    const Ctx& ctx = e.ctx();
    if (auto v = e.rational_value()) {
        if (*v < 0) return std::nullopt;
        Int n = numerator(*v), d = denominator(*v);
        Int sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
        if (sn * sn == n && sd * sd == d) return ScalarExpr(ctx, Rational(sn, sd));
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

bool is_hyperbolic(const MongeAmpereSystem& s, std::vector<RootPair>* roots) {
    const Ctx& ctx = s.algebra()->ctx();
    Quadratic q = root_equation(s);
    if (q.a.is_zero_canonical() && q.b.is_zero_canonical() && q.c.is_zero_canonical())
        return false; // identically degenerate pencil
    ScalarExpr disc = q.b * q.b - q.a * q.c;
    switch (disc.is_zero()) {
    case ZeroTest::Zero:
        return false; // repeated root
    case ZeroTest::Unknown:
        if (!disc.rational_value()) throw IndefiniteSign("discriminant sign undecided: " + disc.str());
        break;
    case ZeroTest::NonzeroByAssumption:
        break;
    }
    if (auto v = disc.rational_value()) {
        if (*v < 0) return false;
    } else if (!ctx->certify_positive(disc.fraction())) {
        throw IndefiniteSign("discriminant not certified positive: " + disc.str());
    }
    auto sq = exact_sqrt(disc);
    if (!sq) {
        // the fixtures keep rational discriminants; try disc == (a/2)^2 etc.
        for (const ScalarExpr* cand : {&q.a, &q.b, &q.c}) {
            ScalarExpr t = *cand;
            if ((t * t - disc).is_zero() == ZeroTest::Zero) { sq = t; break; }
            if (((t * t) * ScalarExpr(ctx, Rational(1, 4)) - disc).is_zero() == ZeroTest::Zero) {
                sq = t * ScalarExpr(ctx, Rational(1, 2));
                break;
            }
        }
    }
    if (!sq) throw IndefiniteSign("discriminant has no exact square root: " + disc.str());
    if (roots) {
        roots->clear();
        ScalarExpr one(ctx, 1);
        if (q.a.is_zero_canonical()) {
            // roots [1:0] and [-c : 2b]
            roots->push_back(RootPair{one, ScalarExpr(ctx, 0)});
            roots->push_back(RootPair{-q.c / (q.b * ScalarExpr(ctx, 2)), one});
        } else {
            roots->push_back(RootPair{(-q.b + *sq) / q.a, one});
            roots->push_back(RootPair{(-q.b - *sq) / q.a, one});
        }
        // deterministic order: mu strings ascending
        if (roots->size() == 2 && (*roots)[1].mu.str() < (*roots)[0].mu.str())
            std::swap((*roots)[0], (*roots)[1]);
    }
    return true;
}

namespace {

std::pair<Form, Form> factor_decomposable(const Form& w) {
    const AlgPtr& alg = w.algebra();
    const Ctx& ctx = alg->ctx();
    if (w.is_zero()) throw FactorizationFailure("cannot factor the zero 2-form");
    // pivot monomial with a certified coefficient when possible
    std::vector<int> pivot;
    ScalarExpr pc;
    for (const auto& [idx, c] : w.terms()) {
        if (c.is_zero() == ZeroTest::NonzeroByAssumption) {
            pivot = idx;
            pc = c;
            break;
        }
        if (pivot.empty()) {
            pivot = idx;
            pc = c;
        }
    }
    VectorField va{alg, {{pivot[0], ScalarExpr(ctx, 1)}}};
    VectorField vb{alg, {{pivot[1], ScalarExpr(ctx, 1)}}};
    Form u = interior_product(va, w);
    Form v = interior_product(vb, w);
    Form check = wedge(u, v) * (ScalarExpr(ctx, 1) / pc) - w;
    if (!check.is_zero())
        throw FactorizationFailure("2-form is not decomposable: residue " + check.str());
    return {u * (ScalarExpr(ctx, 1) / pc), v};
}

} // namespace

CharacteristicPair characteristic_systems(const MongeAmpereSystem& s) {
    std::vector<RootPair> roots;
    if (!is_hyperbolic(s, &roots)) throw FactorizationFailure("system is not hyperbolic");
    CharacteristicPair out;
    std::vector<PfaffianSystem*> sys{&out.C1, &out.C2};
    out.root1 = roots[0];
    out.root2 = roots[1];
    for (int i = 0; i < 2; ++i) {
        Form w = s.Theta() * roots[i].mu + s.psi() * roots[i].nu;
        w = reduce_mod(w, {s.theta()});
        auto [f1, f2] = factor_decomposable(w);
        auto span = reduced_spanning_set({s.theta(), f1, f2});
        *sys[i] = PfaffianSystem(s.algebra(), span);
    }
    return out;
}

bool is_backlund_pair(const SmoothMap& pi1, const SmoothMap& pi2,
                      const MongeAmpereSystem& s1, const MongeAmpereSystem& s2,
                      const std::vector<Form>& extra_mod) {
    Form th1 = pi1.pullback(s1.theta());
    Form th2 = pi2.pullback(s2.theta());
    std::vector<Form> k{th1, th2};
    for (const auto& f : extra_mod) k.push_back(f);
    Eliminations elim;
    try {
        elim = eliminations_for(k);
    } catch (const DependentGenerators&) {
        return false; // degenerate correspondence (e.g. the diagonal)
    }
    Form T1 = apply_eliminations(pi1.pullback(s1.Theta()), elim);
    Form T2 = apply_eliminations(pi2.pullback(s2.Theta()), elim);
    Form P1 = apply_eliminations(pi1.pullback(s1.psi()), elim);
    Form P2 = apply_eliminations(pi2.pullback(s2.psi()), elim);
    // {Psi_1, Psi_2} lies in the span of {Theta_1, Theta_2}, which stays
    // independent; both sides' ideals then share the 2-form space
    // span{Theta_i, Psi_i} mod theta_1, theta_2
    if (span_rank({T1, T2}) != 2) return false;
    return in_span(P1, {T1, T2}) && in_span(P2, {T1, T2});
}

} // namespace eds

