#include "eds/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eds {

// ---------------------------------------------------------------------------
// LinForm
// ---------------------------------------------------------------------------

LinForm LinForm::operator+(const LinForm& o) const {
    LinForm r;
    auto a = terms.begin(), b = o.terms.begin();
    while (a != terms.end() || b != o.terms.end()) {
        if (b == o.terms.end() || (a != terms.end() && a->first < b->first)) {
            r.terms.push_back(*a++);
        } else if (a == terms.end() || b->first < a->first) {
            r.terms.push_back(*b++);
        } else {
            Rational c = a->second + b->second;
            if (c != 0) r.terms.emplace_back(a->first, c);
            ++a; ++b;
        }
    }
    return r;
}

LinForm LinForm::operator-() const {
    LinForm r = *this;
    for (auto& t : r.terms) t.second = -t.second;
    return r;
}

// ---------------------------------------------------------------------------
// Monomial / Poly basics
// ---------------------------------------------------------------------------

int Monomial::degree() const {
    int d = 0;
    for (const auto& f : factors) d += f.second;
    return d;
}

int Monomial::exponent_of(int gen) const {
    for (const auto& f : factors)
        if (f.first == gen) return f.second;
    return 0;
}

bool Monomial::operator<(const Monomial& o) const {
    int da = degree(), db = o.degree();
    if (da != db) return da < db;
    // graded lex, earlier generator ids rank higher
    auto i = factors.begin();
    auto j = o.factors.begin();
    while (i != factors.end() && j != o.factors.end()) {
        if (i->first != j->first) {
            // the one holding the earlier generator has the higher power there
            return i->first > j->first ? true : false;
        }
        if (i->second != j->second) return i->second < j->second;
        ++i; ++j;
    }
    if (i != factors.end()) return false; // *this has an extra later factor... equal prefix: longer = has power in later var -> smaller in lex with earlier-high? both same degree, prefix equal means impossible unless both end
    if (j != o.factors.end()) return true;
    return exparg < o.exparg;
}

bool Poly::is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms.begin()->first.is_one());
}

std::optional<Rational> Poly::constant_value() const {
    if (terms.empty()) return Rational(0);
    if (terms.size() == 1 && terms.begin()->first.is_one()) return terms.begin()->second;
    return std::nullopt;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms) add_term(m, c);
    return *this;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms) r.add_term(m, -c);
    return r;
}

Poly Poly::operator-() const {
    Poly r;
    for (const auto& [m, c] : terms) r.terms.emplace(m, -c);
    return r;
}

Poly poly_one() { return poly_const(1); }

Poly poly_const(const Rational& c) {
    Poly p;
    if (c != 0) p.terms.emplace(Monomial{}, c);
    return p;
}

static Poly poly_gen(int gen) {
    Poly p;
    Monomial m;
    m.factors.emplace_back(gen, 1);
    p.terms.emplace(m, Rational(1));
    return p;
}

static Monomial mono_mul_raw(const Monomial& a, const Monomial& b) {
    Monomial r;
    auto i = a.factors.begin(), j = b.factors.begin();
    while (i != a.factors.end() || j != b.factors.end()) {
        if (j == b.factors.end() || (i != a.factors.end() && i->first < j->first)) {
            r.factors.push_back(*i++);
        } else if (i == a.factors.end() || j->first < i->first) {
            r.factors.push_back(*j++);
        } else {
            r.factors.emplace_back(i->first, i->second + j->second);
            ++i; ++j;
        }
    }
    r.exparg = a.exparg + b.exparg;
    return r;
}

// raw product, no relation rewriting (valid in the relation-free subring)
static Poly poly_mul_raw(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms)
            r.add_term(mono_mul_raw(ma, mb), ca * cb);
    return r;
}

// rewrite one monomial to normal form modulo the relation ideal
static Poly reduce_monomial(const Monomial& m, const ScalarContext& ctx) {
    for (size_t i = 0; i < m.factors.size(); ++i) {
        auto [gid, e] = m.factors[i];
        if (e < 2) continue;
        const auto& g = ctx.gen(gid);
        Poly rel;
        if (g.kind == GenKind::Sin) {
            Poly c2 = poly_gen(ctx.trig_gen(GenKind::Cos, g.sym));
            rel = poly_const(1) - poly_mul_raw(c2, c2);
        } else if (g.kind == GenKind::Sinh) {
            Poly c2 = poly_gen(ctx.trig_gen(GenKind::Cosh, g.sym));
            rel = poly_mul_raw(c2, c2) - poly_const(1);
        } else if (g.kind == GenKind::Sqrt && g.sqrt_rewrite) {
            rel = g.sqrt_arg;
        } else {
            continue;
        }
        Monomial rest = m;
        if (e == 2) rest.factors.erase(rest.factors.begin() + i);
        else rest.factors[i].second = e - 2;
        Poly restp;
        restp.terms.emplace(rest, Rational(1));
        return poly_mul(rel, restp, ctx);
    }
    Poly p;
    p.terms.emplace(m, Rational(1));
    return p;
}

Poly poly_mul(const Poly& a, const Poly& b, const ScalarContext& ctx) {
    Poly r;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            Monomial m = mono_mul_raw(ma, mb);
            Poly red = reduce_monomial(m, ctx);
            for (const auto& [mr, cr] : red.terms) r.add_term(mr, ca * cb * cr);
        }
    return r;
}

// ---------------------------------------------------------------------------
// Multivariate gcd via integer-primitive subresultant PRS.  Only called on
// polynomials from the relation-free subring, where generators behave as
// independent variables.
// ---------------------------------------------------------------------------

static Int int_gcd(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) { Int t = a % b; a = b; b = t; }
    return a;
}

static Poly clear_denominators(const Poly& p, Rational* scale_out = nullptr) {
    Int l = 1;
    for (const auto& [m, c] : p.terms) {
        Int d = denominator(c);
        l = l / int_gcd(l, d) * d;
    }
    Poly r;
    for (const auto& [m, c] : p.terms) r.terms.emplace(m, c * Rational(l));
    if (scale_out) *scale_out = Rational(l);
    return r;
}

static Int integer_content(const Poly& p) {
    Int g = 0;
    for (const auto& [m, c] : p.terms) g = int_gcd(g, numerator(c));
    return g;
}

static Poly poly_scale(const Poly& p, const Rational& c) {
    Poly r;
    if (c == 0) return r;
    for (const auto& [m, k] : p.terms) r.terms.emplace(m, k * c);
    return r;
}

static int main_variable(const Poly& a, const Poly& b) {
    int v = -1;
    for (const Poly* p : {&a, &b})
        for (const auto& [m, c] : p->terms)
            for (const auto& f : m.factors)
                if (v < 0 || f.first < v) v = f.first;
    return v;
}

static int degree_in(const Poly& p, int v) {
    int d = 0;
    for (const auto& [m, c] : p.terms) d = std::max(d, m.exponent_of(v));
    return d;
}

static std::vector<Poly> univariate(const Poly& p, int v) {
    std::vector<Poly> coeffs(degree_in(p, v) + 1);
    for (const auto& [m, c] : p.terms) {
        int e = m.exponent_of(v);
        Monomial rest = m;
        std::erase_if(rest.factors, [&](const auto& f) { return f.first == v; });
        coeffs[e].add_term(rest, c);
    }
    return coeffs;
}

static Poly from_univariate(const std::vector<Poly>& coeffs, int v) {
    Poly r;
    for (size_t e = 0; e < coeffs.size(); ++e)
        for (const auto& [m, c] : coeffs[e].terms) {
            Monomial mm = m;
            if (e > 0) {
                mm.factors.emplace_back(v, static_cast<int>(e));
                std::sort(mm.factors.begin(), mm.factors.end());
            }
            r.add_term(mm, c);
        }
    return r;
}

static int udeg(const std::vector<Poly>& u) {
    for (int i = static_cast<int>(u.size()) - 1; i >= 0; --i)
        if (!u[i].is_zero()) return i;
    return -1;
}

std::optional<Poly> poly_divide_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return Poly{};
    Poly rem = a, quot;
    const auto lead = *b.terms.rbegin();
    int guard = 0;
    while (!rem.is_zero()) {
        if (++guard > 200000) return std::nullopt;
        const auto rlead = *rem.terms.rbegin();
        // divide leading monomials
        Monomial q;
        auto i = rlead.first.factors.begin();
        bool ok = true;
        for (const auto& f : lead.first.factors) {
            while (i != rlead.first.factors.end() && i->first < f.first) {
                q.factors.push_back(*i);
                ++i;
            }
            if (i == rlead.first.factors.end() || i->first != f.first || i->second < f.second) {
                ok = false;
                break;
            }
            if (i->second > f.second) q.factors.emplace_back(i->first, i->second - f.second);
            ++i;
        }
        if (!ok) return std::nullopt;
        for (; i != rlead.first.factors.end(); ++i) q.factors.push_back(*i);
        std::sort(q.factors.begin(), q.factors.end());
        q.exparg = rlead.first.exparg + (-lead.first.exparg);
        Rational qc = rlead.second / lead.second;
        quot.add_term(q, qc);
        Poly t;
        t.terms.emplace(q, qc);
        rem = rem - poly_mul_raw(t, b);
    }
    return quot;
}

static Poly prim_positive(const Poly& p) {
    if (p.is_zero()) return p;
    Poly q = clear_denominators(p);
    Int c = integer_content(q);
    q = poly_scale(q, Rational(1) / Rational(c));
    if (q.terms.rbegin()->second < 0) q = -q;
    return q;
}

Poly poly_gcd(const Poly& a_in, const Poly& b_in) {
    if (a_in.is_zero() && b_in.is_zero()) return Poly{};
    if (a_in.is_zero()) return prim_positive(b_in);
    if (b_in.is_zero()) return prim_positive(a_in);
    Poly a = clear_denominators(a_in), b = clear_denominators(b_in);
    int v = main_variable(a, b);
    if (v < 0)
        return poly_const(Rational(int_gcd(integer_content(a), integer_content(b))));

    auto ua = univariate(a, v), ub = univariate(b, v);
    auto content_of = [&](const std::vector<Poly>& u) {
        Poly c;
        for (const auto& q : u)
            if (!q.is_zero()) c = c.is_zero() ? prim_positive(q) : poly_gcd(c, q);
        return c;
    };
    Poly ca = content_of(ua), cb = content_of(ub);
    auto divide_all = [&](std::vector<Poly>& u, const Poly& c) {
        for (auto& q : u)
            if (!q.is_zero()) q = *poly_divide_exact(q, c);
    };
    divide_all(ua, ca);
    divide_all(ub, cb);
    Poly cont_gcd = poly_gcd(ca, cb);

    if (udeg(ua) < udeg(ub)) std::swap(ua, ub);

    Poly g = poly_one(), h = poly_one();
    while (true) {
        int da = udeg(ua), db = udeg(ub);
        int delta = da - db;
        // pseudo-remainder prem(ua, ub) = lb^(delta+1) ua mod ub
        std::vector<Poly> r = ua;
        const Poly lb = ub[db];
        int steps = delta + 1;
        while (udeg(r) >= db) {
            int dr = udeg(r);
            Poly lr = r[dr];
            std::vector<Poly> nr(std::max<size_t>(r.size(), dr + 1));
            for (int i = 0; i <= dr; ++i)
                if (!r[i].is_zero()) nr[i] = poly_mul_raw(r[i], lb);
            for (int i = 0; i <= db; ++i)
                if (!ub[i].is_zero()) nr[i + dr - db] = nr[i + dr - db] - poly_mul_raw(lr, ub[i]);
            nr[dr] = Poly{};
            r = std::move(nr);
            --steps;
        }
        for (; steps > 0; --steps)
            for (auto& q : r)
                if (!q.is_zero()) q = poly_mul_raw(q, lb);

        if (udeg(r) < 0) {
            Poly res = prim_positive(from_univariate(ub, v));
            auto resu = univariate(res, v);
            Poly cres = content_of(resu);
            divide_all(resu, cres);
            res = poly_mul_raw(from_univariate(resu, v), cont_gcd);
            return prim_positive(res);
        }
        if (udeg(r) == 0) return cont_gcd;

        // divide by g * h^delta (exact, subresultant theory)
        Poly divisor = g;
        for (int i = 0; i < delta; ++i) divisor = poly_mul_raw(divisor, h);
        for (auto& q : r)
            if (!q.is_zero()) q = *poly_divide_exact(q, divisor);
        ua = ub;
        ub = r;
        g = ua[udeg(ua)];
        if (delta > 0) {
            Poly gd = poly_one();
            for (int i = 0; i < delta; ++i) gd = poly_mul_raw(gd, g);
            Poly hd = poly_one();
            for (int i = 0; i < delta - 1; ++i) hd = poly_mul_raw(hd, h);
            h = *poly_divide_exact(gd, hd);
        }
    }
}

// ---------------------------------------------------------------------------
// Fraction normalization
// ---------------------------------------------------------------------------

struct OddSignature {
    std::vector<std::pair<int, int>> odd;
    LinForm exparg;
    auto operator<=>(const OddSignature&) const = default;
};

static bool gen_is_even(const ScalarContext& ctx, int gen) {
    const auto& g = ctx.gen(gen);
    switch (g.kind) {
    case GenKind::Sym:
    case GenKind::Cos:
    case GenKind::Cosh:
    case GenKind::Opaque:
        return true;
    case GenKind::Sqrt:
        return !g.sqrt_rewrite;
    default:
        return false;
    }
}

static std::map<OddSignature, Poly> decompose(const Poly& p, const ScalarContext& ctx) {
    std::map<OddSignature, Poly> comps;
    for (const auto& [m, c] : p.terms) {
        OddSignature sig;
        Monomial even;
        for (const auto& f : m.factors) {
            if (gen_is_even(ctx, f.first)) even.factors.push_back(f);
            else sig.odd.push_back(f);
        }
        sig.exparg = m.exparg;
        comps[sig].add_term(even, c);
    }
    return comps;
}

static Poly recompose(const std::map<OddSignature, Poly>& comps) {
    Poly p;
    for (const auto& [sig, q] : comps)
        for (const auto& [m, c] : q.terms) {
            Monomial mm = m;
            for (const auto& f : sig.odd) mm.factors.push_back(f);
            std::sort(mm.factors.begin(), mm.factors.end());
            mm.exparg = sig.exparg;
            p.add_term(mm, c);
        }
    return p;
}

Fraction normalize_fraction(Poly num, Poly den, const ScalarContext& ctx) {
    if (den.is_zero()) throw DivisionByZero("zero denominator");
    if (num.is_zero()) return Fraction{Poly{}, poly_one()};

    // shift a common exp factor out of the denominator
    {
        bool has_exp = false;
        for (const auto& [m, c] : den.terms)
            if (!m.exparg.empty()) { has_exp = true; break; }
        if (has_exp) {
            Monomial shift;
            shift.exparg = -den.terms.begin()->first.exparg;
            Poly sp;
            sp.terms.emplace(shift, Rational(1));
            num = poly_mul(num, sp, ctx);
            den = poly_mul(den, sp, ctx);
        }
    }

    // clear relation-carrying generators out of the denominator
    for (int guard = 0; guard < 64; ++guard) {
        int bad = -1;
        for (const auto& [m, c] : den.terms) {
            for (const auto& f : m.factors)
                if (!gen_is_even(ctx, f.first)) { bad = f.first; break; }
            if (bad >= 0) break;
        }
        if (bad < 0) break;
        Poly A, B; // den = A + B*g, deg_g <= 1 after reduction
        for (const auto& [m, c] : den.terms) {
            if (m.exponent_of(bad) == 0) {
                A.add_term(m, c);
            } else {
                Monomial mm = m;
                std::erase_if(mm.factors, [&](const auto& f) { return f.first == bad; });
                B.add_term(mm, c);
            }
        }
        Poly conj = A - poly_mul(B, poly_gen(bad), ctx);
        if (conj.is_zero()) { // den = 2*B*g: divide num, den by g instead
            Poly ginv_num = poly_gen(bad);
            num = poly_mul(num, ginv_num, ctx);
            den = poly_mul(den, ginv_num, ctx);
            continue;
        }
        num = poly_mul(num, conj, ctx);
        den = poly_mul(den, conj, ctx);
    }

    // cancel common factors, component-wise over the odd signatures
    bool den_plain = true;
    for (const auto& [m, c] : den.terms)
        if (!m.exparg.empty()) den_plain = false;
    if (den_plain && !den.is_constant()) {
        auto comps = decompose(num, ctx);
        Poly g = prim_positive(den);
        for (const auto& [sig, q] : comps) {
            g = poly_gcd(g, q);
            if (g.is_constant()) break;
        }
        if (!g.is_constant() && !g.is_zero()) {
            for (auto& [sig, q] : comps) q = *poly_divide_exact(q, g);
            den = *poly_divide_exact(den, g);
            num = recompose(comps);
        }
    }

    // scale: integer-primitive denominator, positive leading coefficient
    Rational scale(1);
    Poly iden = clear_denominators(den, &scale);
    Int c = integer_content(iden);
    iden = poly_scale(iden, Rational(1) / Rational(c));
    scale /= Rational(c);
    if (iden.terms.rbegin()->second < 0) {
        iden = -iden;
        scale = -scale;
    }
    num = poly_scale(num, scale);
    return Fraction{std::move(num), std::move(iden)};
}

// ---------------------------------------------------------------------------
// ScalarContext
// ---------------------------------------------------------------------------

std::shared_ptr<ScalarContext> ScalarContext::create() {
    return std::shared_ptr<ScalarContext>(new ScalarContext());
}

int ScalarContext::add_symbol(const std::string& name) {
    if (symbol_ids_.count(name)) throw ConstructionError("duplicate symbol: " + name);
    int id = static_cast<int>(symbols_.size());
    symbols_.push_back(name);
    symbol_ids_[name] = id;
    Gen g;
    g.kind = GenKind::Sym;
    g.sym = id;
    g.name = name;
    std::lock_guard lock(gen_mutex_);
    sym_gens_.push_back(static_cast<int>(gens_.size()));
    gens_.push_back(g);
    return id;
}

int ScalarContext::symbol(const std::string& name) const {
    auto it = symbol_ids_.find(name);
    if (it == symbol_ids_.end()) throw Error("unknown symbol: " + name);
    return it->second;
}

std::optional<int> ScalarContext::find_symbol(const std::string& name) const {
    auto it = symbol_ids_.find(name);
    if (it == symbol_ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& ScalarContext::symbol_name(int sym) const { return symbols_.at(sym); }

int ScalarContext::trig_gen(GenKind kind, int sym) const {
    std::lock_guard lock(gen_mutex_);
    auto key = std::make_pair(kind, sym);
    auto it = trig_lookup_.find(key);
    if (it != trig_lookup_.end()) return it->second;
    Gen g;
    g.kind = kind;
    g.sym = sym;
    int id = static_cast<int>(gens_.size());
    gens_.push_back(g);
    trig_lookup_[key] = id;
    return id;
}

int ScalarContext::sqrt_gen(const Poly& arg, bool rewrite) const {
    std::lock_guard lock(gen_mutex_);
    for (int i = 0; i < static_cast<int>(gens_.size()); ++i)
        if (gens_[i].kind == GenKind::Sqrt && gens_[i].sqrt_arg == arg) return i;
    Gen g;
    g.kind = GenKind::Sqrt;
    g.sqrt_arg = arg;
    g.sqrt_rewrite = rewrite;
    int id = static_cast<int>(gens_.size());
    gens_.push_back(g);
    return id;
}

int ScalarContext::opaque_gen(const std::string& atom, const ScalarExpr& arg) const {
    std::lock_guard lock(gen_mutex_);
    for (int i = 0; i < static_cast<int>(gens_.size()); ++i)
        if (gens_[i].kind == GenKind::Opaque && gens_[i].name == atom &&
            gens_[i].opaque_arg->num == arg.fraction().num &&
            gens_[i].opaque_arg->den == arg.fraction().den)
            return i;
    Gen g;
    g.kind = GenKind::Opaque;
    g.name = atom;
    g.opaque_arg = arg.fraction_ptr();
    int id = static_cast<int>(gens_.size());
    gens_.push_back(g);
    return id;
}

static bool entry_is_single_gen(const AssumptionRegistry::Entry& e, int gen) {
    const Fraction& f = *e.expr;
    if (!f.den.is_constant() || f.den.constant_value() != Rational(1)) return false;
    if (f.num.terms.size() != 1) return false;
    const auto& [m, c] = *f.num.terms.begin();
    return c == 1 && m.exparg.empty() && m.factors.size() == 1 &&
           m.factors[0] == std::make_pair(gen, 1);
}

bool ScalarContext::gen_positive(int gen) const {
    const auto& g = gens_[gen];
    if (g.kind == GenKind::Cosh) return true;                   // cosh >= 1
    if (g.kind == GenKind::Sqrt && g.sqrt_rewrite) return true; // principal root
    for (const auto& e : registry_.entries()) {
        if (!entry_is_single_gen(e, gen)) continue;
        if (e.pred == Pred::Positive) return true;
        if (e.pred == Pred::OpenInterval && e.lo >= 0) return true;
    }
    return false;
}

bool ScalarContext::gen_nonzero(int gen) const {
    if (gen_positive(gen)) return true;
    for (const auto& e : registry_.entries()) {
        if (!entry_is_single_gen(e, gen)) continue;
        if (e.pred == Pred::Nonzero) return true;
        if (e.pred == Pred::OpenInterval && (e.lo >= 0 || e.hi <= 0)) return true;
    }
    return false;
}

bool ScalarContext::poly_nonneg(const Poly& p) const {
    for (const auto& [m, c] : p.terms) {
        if (c < 0) return false;
        for (const auto& f : m.factors)
            if (f.second % 2 == 1 && !gen_positive(f.first)) return false;
    }
    return true;
}

bool ScalarContext::poly_positive(const Poly& p) const {
    if (p.is_zero() || !poly_nonneg(p)) return false;
    for (const auto& [m, c] : p.terms) {
        bool strict = c > 0;
        for (const auto& f : m.factors)
            if (!gen_positive(f.first)) { strict = false; break; }
        if (strict) return true;
    }
    return false;
}

bool ScalarContext::poly_nonzero(const Poly& p, int depth) const {
    if (p.is_zero()) return false;
    if (p.is_constant()) return true;
    if (poly_positive(p) || poly_positive(-p)) return true;
    if (p.terms.size() == 1) {
        const auto& m = p.terms.begin()->first;
        bool ok = true;
        for (const auto& f : m.factors)
            if (!gen_nonzero(f.first)) { ok = false; break; }
        if (ok) return true;
    }
    for (const auto& e : registry_.entries()) {
        bool usable = e.pred == Pred::Nonzero || e.pred == Pred::Positive ||
                      (e.pred == Pred::OpenInterval && (e.lo >= 0 || e.hi <= 0));
        if (!usable) continue;
        // a registered nonzero fraction certifies its numerator
        if (e.expr->num.is_constant()) continue;
        if (p == e.expr->num) return true;
        if (depth > 0) {
            if (auto q = poly_divide_exact(p, e.expr->num)) {
                if (poly_nonzero(*q, depth - 1)) return true;
            }
        }
    }
    return false;
}

bool ScalarContext::certify_nonzero(const Fraction& f) const {
    if (f.num.is_zero()) return false;
    return poly_nonzero(f.num, 4);
}

bool ScalarContext::certify_positive(const Fraction& f) const {
    if (f.num.is_zero()) return false;
    if (poly_positive(f.num) && poly_positive(f.den)) return true;
    if (poly_positive(-f.num) && poly_positive(-f.den)) return true;
    for (const auto& e : registry_.entries()) {
        bool pos = e.pred == Pred::Positive || (e.pred == Pred::OpenInterval && e.lo >= 0);
        if (!pos) continue;
        if (f.num == e.expr->num && f.den == e.expr->den) return true;
        // positive multiple of a registered positive expression
        if (e.expr->den.is_constant() && poly_positive(f.den)) {
            if (auto q = poly_divide_exact(f.num, e.expr->num)) {
                if (poly_positive(*q)) return true;
            }
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// AssumptionRegistry
// ---------------------------------------------------------------------------

void AssumptionRegistry::assume(const ScalarExpr& e, Pred pred) {
    if (sealed_) throw ConstructionError("assumption registry is sealed");
    if (pred == Pred::OpenInterval) throw ConstructionError("interval assumption needs bounds");
    entries_.push_back(Entry{e.fraction_ptr(), pred, 0, 0});
}

void AssumptionRegistry::assume_interval(const ScalarExpr& e, const Rational& lo, const Rational& hi) {
    if (sealed_) throw ConstructionError("assumption registry is sealed");
    entries_.push_back(Entry{e.fraction_ptr(), Pred::OpenInterval, lo, hi});
}

// ---------------------------------------------------------------------------
// ScalarExpr
// ---------------------------------------------------------------------------

ScalarExpr::ScalarExpr(const Ctx& ctx, const Rational& value) : ctx_(ctx) {
    frac_ = std::make_shared<Fraction>(Fraction{poly_const(value), poly_one()});
}

ScalarExpr ScalarExpr::from_gen(const Ctx& ctx, int gen) {
    ScalarExpr e;
    e.ctx_ = ctx;
    e.frac_ = std::make_shared<Fraction>(Fraction{poly_gen(gen), poly_one()});
    return e;
}

ScalarExpr ScalarExpr::symbol(const Ctx& ctx, const std::string& name) {
    return from_gen(ctx, ctx->sym_gen(ctx->symbol(name)));
}

ScalarExpr ScalarExpr::from_fraction(const Ctx& ctx, Fraction f) {
    ScalarExpr e;
    e.ctx_ = ctx;
    e.frac_ = std::make_shared<Fraction>(normalize_fraction(std::move(f.num), std::move(f.den), *ctx));
    return e;
}

static void check_ctx(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.ctx() != b.ctx()) throw AlgebraMismatch("scalars from different contexts");
}

ScalarExpr ScalarExpr::operator+(const ScalarExpr& o) const {
    check_ctx(*this, o);
    Poly n = poly_mul(frac_->num, o.frac_->den, *ctx_) + poly_mul(o.frac_->num, frac_->den, *ctx_);
    Poly d = poly_mul(frac_->den, o.frac_->den, *ctx_);
    return from_fraction(ctx_, Fraction{std::move(n), std::move(d)});
}

ScalarExpr ScalarExpr::operator-(const ScalarExpr& o) const {
    check_ctx(*this, o);
    Poly n = poly_mul(frac_->num, o.frac_->den, *ctx_) - poly_mul(o.frac_->num, frac_->den, *ctx_);
    Poly d = poly_mul(frac_->den, o.frac_->den, *ctx_);
    return from_fraction(ctx_, Fraction{std::move(n), std::move(d)});
}

ScalarExpr ScalarExpr::operator*(const ScalarExpr& o) const {
    check_ctx(*this, o);
    Poly n = poly_mul(frac_->num, o.frac_->num, *ctx_);
    Poly d = poly_mul(frac_->den, o.frac_->den, *ctx_);
    return from_fraction(ctx_, Fraction{std::move(n), std::move(d)});
}

ScalarExpr ScalarExpr::operator/(const ScalarExpr& o) const {
    check_ctx(*this, o);
    if (o.frac_->num.is_zero()) throw DivisionByZero("division by zero expression");
    Poly n = poly_mul(frac_->num, o.frac_->den, *ctx_);
    Poly d = poly_mul(frac_->den, o.frac_->num, *ctx_);
    return from_fraction(ctx_, Fraction{std::move(n), std::move(d)});
}

ScalarExpr ScalarExpr::operator-() const {
    ScalarExpr e;
    e.ctx_ = ctx_;
    e.frac_ = std::make_shared<Fraction>(Fraction{-frac_->num, frac_->den});
    return e;
}

ScalarExpr ScalarExpr::pow(long long e) const {
    ScalarExpr base = *this;
    if (e < 0) {
        base = ScalarExpr(ctx_, 1) / base;
        e = -e;
    }
    ScalarExpr r(ctx_, 1);
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

bool ScalarExpr::is_one() const {
    auto v = rational_value();
    return v && *v == 1;
}

std::optional<Rational> ScalarExpr::rational_value() const {
    auto nv = frac_->num.constant_value();
    auto dv = frac_->den.constant_value();
    if (!nv || !dv) return std::nullopt;
    return *nv / *dv;
}

ZeroTest ScalarExpr::is_zero() const {
    if (frac_->num.is_zero()) return ZeroTest::Zero;
    if (ctx_->certify_nonzero(*frac_)) return ZeroTest::NonzeroByAssumption;
    return ZeroTest::Unknown;
}

bool ScalarExpr::identical(const ScalarExpr& o) const {
    return frac_->num == o.frac_->num && frac_->den == o.frac_->den;
}

// ---------------------------------------------------------------------------
// atoms
// ---------------------------------------------------------------------------

static std::optional<std::vector<std::pair<int, long long>>> as_int_linear(const ScalarExpr& e) {
    const Fraction& f = e.fraction();
    if (!f.den.is_constant() || f.den.constant_value() != Rational(1)) return std::nullopt;
    std::vector<std::pair<int, long long>> out;
    for (const auto& [m, c] : f.num.terms) {
        if (m.factors.size() != 1 || m.factors[0].second != 1 || !m.exparg.empty())
            return std::nullopt;
        const auto& g = e.ctx()->gen(m.factors[0].first);
        if (g.kind != GenKind::Sym) return std::nullopt;
        if (denominator(c) != 1) return std::nullopt;
        Int n = numerator(c);
        if (n > 1000 || n < -1000) return std::nullopt;
        out.emplace_back(g.sym, n.convert_to<long long>());
    }
    return out;
}

static ScalarExpr opaque_atom(const std::string& name, const ScalarExpr& arg) {
    return ScalarExpr::from_gen(arg.ctx(), arg.ctx()->opaque_gen(name, arg));
}

static std::pair<ScalarExpr, ScalarExpr>
circ_of_linear(const Ctx& ctx, const std::vector<std::pair<int, long long>>& lin, bool hyperbolic) {
    ScalarExpr s(ctx, 0), c(ctx, 1);
    GenKind sk = hyperbolic ? GenKind::Sinh : GenKind::Sin;
    GenKind ck = hyperbolic ? GenKind::Cosh : GenKind::Cos;
    ScalarExpr sign(ctx, hyperbolic ? 1 : -1);
    for (auto [sym, n] : lin) {
        ScalarExpr s1 = ScalarExpr::from_gen(ctx, ctx->trig_gen(sk, sym));
        ScalarExpr c1 = ScalarExpr::from_gen(ctx, ctx->trig_gen(ck, sym));
        bool neg = n < 0;
        long long k = neg ? -n : n;
        ScalarExpr sn(ctx, 0), cn(ctx, 1);
        for (long long i = 0; i < k; ++i) {
            ScalarExpr ns = sn * c1 + cn * s1;
            ScalarExpr nc = cn * c1 + sn * s1 * sign;
            sn = ns;
            cn = nc;
        }
        if (neg) sn = -sn;
        ScalarExpr ns = s * cn + c * sn;
        ScalarExpr nc = c * cn + s * sn * sign;
        s = ns;
        c = nc;
    }
    return {s, c};
}

ScalarExpr sin(const ScalarExpr& e) {
    if (e.is_zero_canonical()) return ScalarExpr(e.ctx(), 0);
    if (auto lin = as_int_linear(e)) return circ_of_linear(e.ctx(), *lin, false).first;
    return opaque_atom("sin", e);
}

ScalarExpr cos(const ScalarExpr& e) {
    if (e.is_zero_canonical()) return ScalarExpr(e.ctx(), 1);
    if (auto lin = as_int_linear(e)) return circ_of_linear(e.ctx(), *lin, false).second;
    return opaque_atom("cos", e);
}

ScalarExpr sinh(const ScalarExpr& e) {
    if (e.is_zero_canonical()) return ScalarExpr(e.ctx(), 0);
    if (auto lin = as_int_linear(e)) return circ_of_linear(e.ctx(), *lin, true).first;
    return opaque_atom("sinh", e);
}

ScalarExpr cosh(const ScalarExpr& e) {
    if (e.is_zero_canonical()) return ScalarExpr(e.ctx(), 1);
    if (auto lin = as_int_linear(e)) return circ_of_linear(e.ctx(), *lin, true).second;
    return opaque_atom("cosh", e);
}

ScalarExpr tan(const ScalarExpr& e) { return sin(e) / cos(e); }
ScalarExpr csc(const ScalarExpr& e) { return ScalarExpr(e.ctx(), 1) / sin(e); }
ScalarExpr cot(const ScalarExpr& e) { return cos(e) / sin(e); }
ScalarExpr tanh(const ScalarExpr& e) { return sinh(e) / cosh(e); }

ScalarExpr exp(const ScalarExpr& e) {
    const Fraction& f = e.fraction();
    bool linear = f.den.is_constant() && f.den.constant_value() == Rational(1);
    LinForm lf;
    if (linear) {
        for (const auto& [m, c] : f.num.terms) {
            if (m.is_one()) {
                lf.terms.emplace_back(-1, c);
                continue;
            }
            if (m.factors.size() != 1 || m.factors[0].second != 1 || !m.exparg.empty() ||
                e.ctx()->gen(m.factors[0].first).kind != GenKind::Sym) {
                linear = false;
                break;
            }
            lf.terms.emplace_back(e.ctx()->gen(m.factors[0].first).sym, c);
        }
    }
    if (!linear) return opaque_atom("exp", e);
    std::sort(lf.terms.begin(), lf.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Poly p;
    Monomial m;
    m.exparg = lf;
    p.terms.emplace(m, Rational(1));
    return ScalarExpr::from_fraction(e.ctx(), Fraction{std::move(p), poly_one()});
}

ScalarExpr log(const ScalarExpr& e) {
    if (e.is_one()) return ScalarExpr(e.ctx(), 0);
    return opaque_atom("log", e);
}

ScalarExpr arctan(const ScalarExpr& e) {
    if (e.is_zero_canonical()) return ScalarExpr(e.ctx(), 0);
    return opaque_atom("arctan", e);
}

ScalarExpr sqrt(const ScalarExpr& e) {
    const Fraction& f = e.fraction();
    if (auto v = e.rational_value()) {
        Int n = numerator(*v), d = denominator(*v);
        if (n >= 0) {
            Int sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
            if (sn * sn == n && sd * sd == d) return ScalarExpr(e.ctx(), Rational(sn, sd));
        }
    }
    bool plain = f.den.is_constant() && f.den.constant_value() == Rational(1);
    if (plain)
        for (const auto& [m, c] : f.num.terms)
            if (!m.exparg.empty()) plain = false;
    if (plain) {
        // peel perfect squares of registered-positive polynomial factors,
        // so that e.g. sqrt((1-tx)^2 * 2p) = (1-tx) sqrt(2p)
        Poly arg = f.num;
        ScalarExpr factor(e.ctx(), 1);
        bool peeled = true;
        while (peeled) {
            peeled = false;
            for (const auto& entry : e.ctx()->registry().entries()) {
                bool pos = entry.pred == Pred::Positive ||
                           (entry.pred == Pred::OpenInterval && entry.lo >= 0);
                if (!pos || entry.expr->num.is_constant()) continue;
                if (!entry.expr->den.is_constant()) continue;
                Poly sq = poly_mul(entry.expr->num, entry.expr->num, *e.ctx());
                if (auto q = poly_divide_exact(arg, sq)) {
                    if (q->is_zero()) continue;
                    arg = *q;
                    factor = factor * ScalarExpr::from_fraction(
                                          e.ctx(), Fraction{entry.expr->num, poly_one()});
                    peeled = true;
                    break;
                }
            }
        }
        ScalarExpr rest = ScalarExpr::from_fraction(e.ctx(), Fraction{arg, poly_one()});
        if (auto v = rest.rational_value()) {
            Int n = numerator(*v);
            if (n >= 0) {
                Int sn = boost::multiprecision::sqrt(n);
                if (sn * sn == n) return factor * ScalarExpr(e.ctx(), Rational(sn));
            }
        }
        if (e.ctx()->certify_positive(rest.fraction()))
            return factor * ScalarExpr::from_gen(e.ctx(), e.ctx()->sqrt_gen(arg, true));
        if (!factor.is_one()) return factor * opaque_atom("sqrt", rest);
    }
    return opaque_atom("sqrt", e);
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

static ScalarExpr diff_gen(const Ctx& ctx, int gen, int sym);

static ScalarExpr diff_poly(const Ctx& ctx, const Poly& p, int sym) {
    ScalarExpr acc(ctx, 0);
    for (const auto& [m, c] : p.terms) {
        for (size_t i = 0; i < m.factors.size(); ++i) {
            auto [g, e] = m.factors[i];
            ScalarExpr dg = diff_gen(ctx, g, sym);
            if (dg.is_zero_canonical()) continue;
            Monomial rest = m;
            if (e == 1) rest.factors.erase(rest.factors.begin() + i);
            else rest.factors[i].second = e - 1;
            Poly rp;
            rp.terms.emplace(rest, c * e);
            acc += ScalarExpr::from_fraction(ctx, Fraction{rp, poly_one()}) * dg;
        }
        if (!m.exparg.empty()) {
            Rational k = 0;
            for (const auto& t : m.exparg.terms)
                if (t.first == sym) k = t.second;
            if (k != 0) {
                Poly rp;
                rp.terms.emplace(m, c * k);
                acc += ScalarExpr::from_fraction(ctx, Fraction{rp, poly_one()});
            }
        }
    }
    return acc;
}

static ScalarExpr diff_gen(const Ctx& ctx, int gen, int sym) {
    const auto& g = ctx->gen(gen);
    switch (g.kind) {
    case GenKind::Sym:
        return ScalarExpr(ctx, g.sym == sym ? 1 : 0);
    case GenKind::Sin:
        if (g.sym != sym) return ScalarExpr(ctx, 0);
        return ScalarExpr::from_gen(ctx, ctx->trig_gen(GenKind::Cos, g.sym));
    case GenKind::Cos:
        if (g.sym != sym) return ScalarExpr(ctx, 0);
        return -ScalarExpr::from_gen(ctx, ctx->trig_gen(GenKind::Sin, g.sym));
    case GenKind::Sinh:
        if (g.sym != sym) return ScalarExpr(ctx, 0);
        return ScalarExpr::from_gen(ctx, ctx->trig_gen(GenKind::Cosh, g.sym));
    case GenKind::Cosh:
        if (g.sym != sym) return ScalarExpr(ctx, 0);
        return ScalarExpr::from_gen(ctx, ctx->trig_gen(GenKind::Sinh, g.sym));
    case GenKind::Sqrt: {
        ScalarExpr darg = diff_poly(ctx, g.sqrt_arg, sym);
        if (darg.is_zero_canonical()) return darg;
        return darg / (ScalarExpr(ctx, 2) * ScalarExpr::from_gen(ctx, gen));
    }
    case GenKind::Opaque: {
        ScalarExpr arg = ScalarExpr::from_fraction(ctx, *g.opaque_arg);
        ScalarExpr darg = arg.differentiate(sym);
        if (darg.is_zero_canonical()) return darg;
        if (g.name == "log") return darg / arg;
        if (g.name == "arctan") return darg / (ScalarExpr(ctx, 1) + arg * arg);
        if (g.name == "exp") return darg * ScalarExpr::from_gen(ctx, gen);
        if (g.name == "sqrt") return darg / (ScalarExpr(ctx, 2) * ScalarExpr::from_gen(ctx, gen));
        if (g.name == "sin") return darg * opaque_atom("cos", arg);
        if (g.name == "cos") return -darg * opaque_atom("sin", arg);
        if (g.name == "sinh") return darg * opaque_atom("cosh", arg);
        if (g.name == "cosh") return darg * opaque_atom("sinh", arg);
        throw UnsupportedAtom("no derivative rule for atom " + g.name);
    }
    }
    throw UnsupportedAtom("unreachable");
}

ScalarExpr ScalarExpr::differentiate(int sym) const {
    ScalarExpr dn = diff_poly(ctx_, frac_->num, sym);
    if (frac_->den.is_constant()) {
        return dn / from_fraction(ctx_, Fraction{frac_->den, poly_one()});
    }
    ScalarExpr dd = diff_poly(ctx_, frac_->den, sym);
    ScalarExpr den = from_fraction(ctx_, Fraction{frac_->den, poly_one()});
    ScalarExpr num = from_fraction(ctx_, Fraction{frac_->num, poly_one()});
    return (dn * den - num * dd) / (den * den);
}

ScalarExpr ScalarExpr::differentiate(const std::string& sym) const {
    return differentiate(ctx_->symbol(sym));
}

// ---------------------------------------------------------------------------
// substitution and evaluation
// ---------------------------------------------------------------------------

static ScalarExpr subst_sym(const Ctx& src, const Ctx& dst,
                            const std::map<int, ScalarExpr>& images, int sym) {
    auto it = images.find(sym);
    if (it != images.end()) return it->second;
    if (src == dst) return ScalarExpr::from_gen(dst, src->sym_gen(sym));
    if (dst->find_symbol(src->symbol_name(sym)))
        return ScalarExpr::symbol(dst, src->symbol_name(sym));
    throw UntabledSymbol("substitution has no image for symbol " + src->symbol_name(sym));
}

static ScalarExpr subst_poly(const Ctx& src, const Poly& p, const Ctx& dst,
                             const std::map<int, ScalarExpr>& images) {
    ScalarExpr acc(dst, 0);
    for (const auto& [m, c] : p.terms) {
        ScalarExpr t(dst, c);
        for (const auto& [g, e] : m.factors) {
            const auto& gen = src->gen(g);
            ScalarExpr img;
            switch (gen.kind) {
            case GenKind::Sym: img = subst_sym(src, dst, images, gen.sym); break;
            case GenKind::Sin: img = sin(subst_sym(src, dst, images, gen.sym)); break;
            case GenKind::Cos: img = cos(subst_sym(src, dst, images, gen.sym)); break;
            case GenKind::Sinh: img = sinh(subst_sym(src, dst, images, gen.sym)); break;
            case GenKind::Cosh: img = cosh(subst_sym(src, dst, images, gen.sym)); break;
            case GenKind::Sqrt: img = sqrt(subst_poly(src, gen.sqrt_arg, dst, images)); break;
            case GenKind::Opaque: {
                ScalarExpr arg = subst_poly(src, gen.opaque_arg->num, dst, images) /
                                 subst_poly(src, gen.opaque_arg->den, dst, images);
                if (gen.name == "sin") img = sin(arg);
                else if (gen.name == "cos") img = cos(arg);
                else if (gen.name == "sinh") img = sinh(arg);
                else if (gen.name == "cosh") img = cosh(arg);
                else if (gen.name == "exp") img = exp(arg);
                else if (gen.name == "log") img = log(arg);
                else if (gen.name == "sqrt") img = sqrt(arg);
                else if (gen.name == "arctan") img = arctan(arg);
                else throw UnsupportedAtom("cannot substitute into atom " + gen.name);
                break;
            }
            }
            t = t * img.pow(e);
        }
        if (!m.exparg.empty()) {
            ScalarExpr a(dst, 0);
            for (const auto& [sym, k] : m.exparg.terms) {
                if (sym < 0) a += ScalarExpr(dst, k);
                else a += ScalarExpr(dst, k) * subst_sym(src, dst, images, sym);
            }
            t = t * exp(a);
        }
        acc += t;
    }
    return acc;
}

ScalarExpr ScalarExpr::substitute(const Ctx& dst, const std::map<int, ScalarExpr>& images) const {
    ScalarExpr n = subst_poly(ctx_, frac_->num, dst, images);
    ScalarExpr d = subst_poly(ctx_, frac_->den, dst, images);
    if (d.is_zero_canonical()) throw DivisionByZero("substitution maps denominator to zero");
    return n / d;
}

static double eval_poly(const Ctx& ctx, const Poly& p, const std::map<int, double>& pt);

static double eval_gen(const Ctx& ctx, int g, const std::map<int, double>& pt) {
    const auto& gen = ctx->gen(g);
    auto symval = [&](int s) {
        auto it = pt.find(s);
        if (it == pt.end()) throw Error("no value for symbol " + ctx->symbol_name(s));
        return it->second;
    };
    switch (gen.kind) {
    case GenKind::Sym: return symval(gen.sym);
    case GenKind::Sin: return std::sin(symval(gen.sym));
    case GenKind::Cos: return std::cos(symval(gen.sym));
    case GenKind::Sinh: return std::sinh(symval(gen.sym));
    case GenKind::Cosh: return std::cosh(symval(gen.sym));
    case GenKind::Sqrt: return std::sqrt(eval_poly(ctx, gen.sqrt_arg, pt));
    case GenKind::Opaque: {
        double a = eval_poly(ctx, gen.opaque_arg->num, pt) / eval_poly(ctx, gen.opaque_arg->den, pt);
        if (gen.name == "sin") return std::sin(a);
        if (gen.name == "cos") return std::cos(a);
        if (gen.name == "sinh") return std::sinh(a);
        if (gen.name == "cosh") return std::cosh(a);
        if (gen.name == "exp") return std::exp(a);
        if (gen.name == "log") return std::log(a);
        if (gen.name == "sqrt") return std::sqrt(a);
        if (gen.name == "arctan") return std::atan(a);
        throw UnsupportedAtom("cannot evaluate atom " + gen.name);
    }
    }
    return 0;
}

static double eval_poly(const Ctx& ctx, const Poly& p, const std::map<int, double>& pt) {
    double acc = 0;
    for (const auto& [m, c] : p.terms) {
        double t = c.convert_to<double>();
        for (const auto& [g, e] : m.factors) t *= std::pow(eval_gen(ctx, g, pt), e);
        if (!m.exparg.empty()) {
            double a = 0;
            for (const auto& [sym, k] : m.exparg.terms)
                a += k.convert_to<double>() * (sym < 0 ? 1.0 : pt.at(sym));
            t *= std::exp(a);
        }
        acc += t;
    }
    return acc;
}

double ScalarExpr::evaluate(const std::map<int, double>& point) const {
    return eval_poly(ctx_, frac_->num, point) / eval_poly(ctx_, frac_->den, point);
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

static std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

static std::string poly_str(const Ctx& ctx, const Poly& p);

static std::string gen_str(const Ctx& ctx, int g) {
    const auto& gen = ctx->gen(g);
    switch (gen.kind) {
    case GenKind::Sym: return ctx->symbol_name(gen.sym);
    case GenKind::Sin: return "sin(" + ctx->symbol_name(gen.sym) + ")";
    case GenKind::Cos: return "cos(" + ctx->symbol_name(gen.sym) + ")";
    case GenKind::Sinh: return "sinh(" + ctx->symbol_name(gen.sym) + ")";
    case GenKind::Cosh: return "cosh(" + ctx->symbol_name(gen.sym) + ")";
    case GenKind::Sqrt: return "sqrt(" + poly_str(ctx, gen.sqrt_arg) + ")";
    case GenKind::Opaque: {
        std::string a = poly_str(ctx, gen.opaque_arg->num);
        if (!gen.opaque_arg->den.is_constant() ||
            gen.opaque_arg->den.constant_value() != Rational(1))
            a = "(" + a + ")/(" + poly_str(ctx, gen.opaque_arg->den) + ")";
        return gen.name + "(" + a + ")";
    }
    }
    return "?";
}

static std::string mono_str(const Ctx& ctx, const Monomial& m) {
    std::string s;
    for (const auto& [g, e] : m.factors) {
        if (!s.empty()) s += "*";
        s += gen_str(ctx, g);
        if (e != 1) s += "^" + std::to_string(e);
    }
    if (!m.exparg.empty()) {
        if (!s.empty()) s += "*";
        std::string a;
        for (const auto& [sym, k] : m.exparg.terms) {
            std::string t;
            if (sym < 0) t = rational_str(k);
            else if (k == 1) t = ctx->symbol_name(sym);
            else if (k == -1) t = "-" + ctx->symbol_name(sym);
            else t = rational_str(k) + "*" + ctx->symbol_name(sym);
            if (!a.empty() && t[0] != '-') a += "+";
            a += t;
        }
        s += "exp(" + a + ")";
    }
    return s;
}

static std::string poly_str(const Ctx& ctx, const Poly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational ac = c < 0 ? Rational(-c) : c;
        std::string t;
        if (m.is_one()) t = rational_str(ac);
        else if (ac == 1) t = mono_str(ctx, m);
        else t = rational_str(ac) + "*" + mono_str(ctx, m);
        if (s.empty()) s = (c < 0 ? "-" : "") + t;
        else s += (c < 0 ? " - " : " + ") + t;
    }
    return s;
}

std::string ScalarExpr::str() const {
    if (!frac_) return "<null>";
    if (frac_->den.is_constant() && frac_->den.constant_value() == Rational(1))
        return poly_str(ctx_, frac_->num);
    return "(" + poly_str(ctx_, frac_->num) + ")/(" + poly_str(ctx_, frac_->den) + ")";
}

} // namespace eds
