#include "eds/form.hpp"

#include <algorithm>
#include <sstream>

namespace eds {

// ---------------------------------------------------------------------------
// Form
// ---------------------------------------------------------------------------

int Form::degree() const {
    if (terms_.empty()) return 0;
    size_t d = terms_.begin()->first.size();
    for (const auto& [idx, c] : terms_)
        if (idx.size() != d) throw Error("mixed-degree form");
    return static_cast<int>(d);
}

void Form::add(const std::vector<int>& idx, const ScalarExpr& c) {
    if (!c.valid() || c.is_zero_canonical()) return;
    std::vector<int> s = idx;
    int sign = 1;
    // insertion sort, counting transpositions; repeated index kills the term
    for (size_t i = 1; i < s.size(); ++i)
        for (size_t j = i; j > 0 && s[j] <= s[j - 1]; --j) {
            if (s[j] == s[j - 1]) return;
            std::swap(s[j], s[j - 1]);
            sign = -sign;
        }
    ScalarExpr v = sign < 0 ? -c : c;
    auto it = terms_.find(s);
    if (it == terms_.end()) {
        terms_.emplace(std::move(s), v);
    } else {
        it->second += v;
        if (it->second.is_zero_canonical()) terms_.erase(it);
    }
}

ScalarExpr Form::coefficient(const std::vector<int>& idx) const {
    auto it = terms_.find(idx);
    if (it != terms_.end()) return it->second;
    return ScalarExpr(alg_->ctx(), 0);
}

static void check_alg(const Form& a, const Form& b) {
    if (a.algebra() != b.algebra()) throw AlgebraMismatch("forms live on different algebras");
}

Form Form::operator+(const Form& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    check_alg(*this, o);
    Form r = *this;
    for (const auto& [idx, c] : o.terms_) r.add(idx, c);
    return r;
}

Form Form::operator-(const Form& o) const { return *this + (-o); }

Form Form::operator-() const {
    Form r(alg_);
    for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, -c);
    return r;
}

Form Form::operator*(const ScalarExpr& c) const {
    Form r(alg_);
    for (const auto& [idx, k] : terms_) r.add(idx, k * c);
    return r;
}

bool Form::identical(const Form& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    for (; i != terms_.end(); ++i, ++j)
        if (i->first != j->first || !i->second.identical(j->second)) return false;
    return true;
}

Form wedge(const Form& a, const Form& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    check_alg(a, b);
    Form r(a.alg_);
    for (const auto& [ia, ca] : a.terms_)
        for (const auto& [ib, cb] : b.terms_) {
            std::vector<int> idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add(idx, ca * cb);
        }
    return r;
}

std::string Form::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [idx, c] : terms_) {
        std::string mono;
        for (size_t i = 0; i < idx.size(); ++i) {
            if (i) mono += "^";
            mono += alg_->basis_names()[idx[i]];
        }
        std::string cs = c.str();
        bool neg = cs.size() > 1 && cs[0] == '-' && cs.find(' ') == std::string::npos &&
                   cs.find('+') == std::string::npos;
        std::string t;
        if (idx.empty()) t = "(" + cs + ")";
        else if (c.is_one()) t = mono;
        else if (neg && cs == "-1") t = "-" + mono;
        else t = "(" + cs + ")*" + mono;
        if (!s.empty()) s += t.size() && t[0] == '-' ? " " : " + ";
        s += t;
    }
    return s;
}

// ---------------------------------------------------------------------------
// VectorField
// ---------------------------------------------------------------------------

ScalarExpr VectorField::component(int idx) const {
    auto it = components.find(idx);
    if (it != components.end()) return it->second;
    return ScalarExpr(alg->ctx(), 0);
}

Form interior_product(const VectorField& v, const Form& a) {
    if (v.alg != a.algebra()) throw AlgebraMismatch("vector field on a different algebra");
    Form r(v.alg);
    for (const auto& [idx, c] : a.terms()) {
        for (size_t m = 0; m < idx.size(); ++m) {
            ScalarExpr comp = v.component(idx[m]);
            if (comp.is_zero_canonical()) continue;
            std::vector<int> rest;
            for (size_t k = 0; k < idx.size(); ++k)
                if (k != m) rest.push_back(idx[k]);
            ScalarExpr val = c * comp;
            if (m % 2 == 1) val = -val;
            r.add(rest, val);
        }
    }
    return r;
}

Form lie_derivative(const VectorField& v, const Form& a) {
    const auto& alg = a.algebra();
    return alg->d(interior_product(v, a)) + interior_product(v, alg->d(a));
}

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

AlgPtr Algebra::coordinate_chart(const Ctx& ctx, const std::vector<std::string>& coords,
                                 const std::vector<std::string>& constants) {
    AlgPtr alg(new Algebra());
    alg->ctx_ = ctx;
    alg->mode_ = Mode::CoordinateChart;
    for (const auto& c : coords) {
        alg->basis_ids_["d" + c] = static_cast<int>(alg->basis_.size());
        alg->basis_.push_back("d" + c);
    }
    for (size_t i = 0; i < coords.size(); ++i) {
        alg->d_basis_.push_back(Form(alg)); // d(dx) = 0
        int sym = ctx->find_symbol(coords[i]) ? ctx->symbol(coords[i]) : ctx->add_symbol(coords[i]);
        Form dx(alg);
        dx.add({static_cast<int>(i)}, ScalarExpr(ctx, 1));
        alg->d_scalar_.emplace(sym, dx);
    }
    for (const auto& c : constants) {
        int sym = ctx->find_symbol(c) ? ctx->symbol(c) : ctx->add_symbol(c);
        alg->d_scalar_.emplace(sym, Form(alg));
    }
    alg->sealed_ = true;
    return alg;
}

AlgPtr Algebra::abstract(const Ctx& ctx, const std::vector<std::string>& basis) {
    AlgPtr alg(new Algebra());
    alg->ctx_ = ctx;
    alg->mode_ = Mode::Abstract;
    for (const auto& b : basis) {
        alg->basis_ids_[b] = static_cast<int>(alg->basis_.size());
        alg->basis_.push_back(b);
    }
    alg->d_basis_.assign(basis.size(), Form());
    return alg;
}

void Algebra::set_structure(const std::string& basis_name, const Form& d2form) {
    if (sealed_) throw ConstructionError("algebra is sealed");
    d_basis_.at(basis_index(basis_name)) = d2form;
}

void Algebra::set_scalar_differential(const std::string& sym, const Form& d1form) {
    if (sealed_) throw ConstructionError("algebra is sealed");
    int id = ctx_->find_symbol(sym) ? ctx_->symbol(sym) : ctx_->add_symbol(sym);
    d_scalar_[id] = d1form;
}

void Algebra::seal() {
    if (sealed_) return;
    for (auto& f : d_basis_)
        if (!f.algebra()) f = Form(shared_from_this());
    sealed_ = true;
    for (int i = 0; i < dim(); ++i) {
        Form dd = d(d_basis_[i]);
        if (!dd.is_zero())
            throw ConstructionError("d^2 != 0 on basis form " + basis_[i] + ": " + dd.str());
    }
    for (const auto& [sym, df] : d_scalar_) {
        Form dd = d(df);
        if (!dd.is_zero())
            throw ConstructionError("d^2 != 0 on symbol " + ctx_->symbol_name(sym) + ": " + dd.str());
    }
}

int Algebra::basis_index(const std::string& name) const {
    auto it = basis_ids_.find(name);
    if (it == basis_ids_.end()) throw Error("unknown basis covector: " + name);
    return it->second;
}

Form Algebra::covector(int idx) {
    Form f(shared_from_this());
    f.add({idx}, ScalarExpr(ctx_, 1));
    return f;
}

Form Algebra::covector(const std::string& name) { return covector(basis_index(name)); }

Form Algebra::scalar(const ScalarExpr& c) {
    Form f(shared_from_this());
    f.add({}, c);
    return f;
}

bool Algebra::has_symbol_differential(int sym) const { return d_scalar_.count(sym) > 0; }

Form Algebra::d_symbol(int sym) const {
    auto it = d_scalar_.find(sym);
    if (it == d_scalar_.end())
        throw UntabledSymbol("no differential tabled for symbol " + ctx_->symbol_name(sym));
    return it->second;
}

std::set<int> collect_symbols(const ScalarExpr& e) {
    std::set<int> out;
    std::function<void(const Poly&)> walk_poly = [&](const Poly& p) {
        for (const auto& [m, c] : p.terms) {
            for (const auto& [g, ex] : m.factors) {
                const auto& gen = e.ctx()->gen(g);
                switch (gen.kind) {
                case GenKind::Sym:
                case GenKind::Sin:
                case GenKind::Cos:
                case GenKind::Sinh:
                case GenKind::Cosh:
                    out.insert(gen.sym);
                    break;
                case GenKind::Sqrt:
                    walk_poly(gen.sqrt_arg);
                    break;
                case GenKind::Opaque:
                    walk_poly(gen.opaque_arg->num);
                    walk_poly(gen.opaque_arg->den);
                    break;
                }
            }
            for (const auto& [sym, k] : m.exparg.terms)
                if (sym >= 0) out.insert(sym);
        }
    };
    walk_poly(e.fraction().num);
    walk_poly(e.fraction().den);
    return out;
}

Form Algebra::d_term(const std::vector<int>& idx, const ScalarExpr& c) const {
    auto self = const_cast<Algebra*>(this)->shared_from_this();
    // d(c) ^ e^I
    Form dc(self);
    for (int sym : collect_symbols(c)) {
        ScalarExpr pd = c.differentiate(sym);
        if (pd.is_zero_canonical()) continue;
        dc += d_symbol(sym) * pd;
    }
    Form monomial(self);
    monomial.add(idx, ScalarExpr(ctx_, 1));
    Form r = wedge(dc, monomial);
    // + c * sum_k (-1)^(k-1) e^{i1} ^ ... ^ d(e^{ik}) ^ ...
    for (size_t k = 0; k < idx.size(); ++k) {
        const Form& mid = d_basis_.at(idx[k]);
        if (mid.is_zero()) continue;
        for (const auto& [midx, mc] : mid.terms()) {
            std::vector<int> full;
            for (size_t j = 0; j < k; ++j) full.push_back(idx[j]);
            full.insert(full.end(), midx.begin(), midx.end());
            for (size_t j = k + 1; j < idx.size(); ++j) full.push_back(idx[j]);
            ScalarExpr val = c * mc;
            if (k % 2 == 1) val = -val;
            r.add(full, val);
        }
    }
    return r;
}

Form Algebra::d(const Form& a) const {
    if (!sealed_) throw ConstructionError("algebra not sealed");
    auto self = const_cast<Algebra*>(this)->shared_from_this();
    if (a.is_zero()) return Form(self);
    if (a.algebra().get() != this) throw AlgebraMismatch("form from another algebra");
    Form r(self);
    for (const auto& [idx, c] : a.terms()) r += d_term(idx, c);
    return r;
}

// ---------------------------------------------------------------------------
// reduce_mod
// ---------------------------------------------------------------------------

Eliminations eliminations_for(const std::vector<Form>& gens) {
    Eliminations elim;
    if (gens.empty()) return elim;
    const AlgPtr& alg = gens.front().algebra();
    for (const auto& g : gens) {
        if (g.algebra() != alg) throw AlgebraMismatch("generators on different algebras");
        if (g.degree() > 1) throw Error("reduce_mod generators must be 1-forms");
        Form r = apply_eliminations(g, elim);
        if (r.is_zero()) throw DependentGenerators("dependent generator: " + g.str());
        int lead = -1;
        ScalarExpr pivot;
        ScalarExpr first_unknown;
        for (int i = 0; i < alg->dim(); ++i) {
            ScalarExpr c = r.coefficient({i});
            switch (c.is_zero()) {
            case ZeroTest::Zero:
                continue;
            case ZeroTest::NonzeroByAssumption:
                lead = i;
                pivot = c;
                break;
            case ZeroTest::Unknown:
                if (!first_unknown.valid()) first_unknown = c;
                continue;
            }
            if (lead >= 0) break;
        }
        if (lead < 0) {
            throw UnknownPivot("no certified pivot; first undecided coefficient: " +
                               first_unknown.str());
        }
        // e^lead = -(r - pivot e^lead)/pivot
        Form rest = r;
        Form leadform(r.algebra());
        leadform.add({lead}, pivot);
        rest -= leadform;
        Form repl = rest * (-(ScalarExpr(alg->ctx(), 1) / pivot));
        // keep previously stored replacements clean of the new direction
        for (auto& [dir, f] : elim.replacement) {
            Eliminations single;
            single.replacement.emplace(lead, repl);
            f = apply_eliminations(f, single);
        }
        elim.replacement.emplace(lead, repl);
    }
    return elim;
}

Form apply_eliminations(const Form& a, const Eliminations& e) {
    Form cur = a;
    for (int guard = 0; guard < 64; ++guard) {
        bool dirty = false;
        Form next(cur.algebra());
        for (const auto& [idx, c] : cur.terms()) {
            size_t hit = idx.size();
            for (size_t m = 0; m < idx.size(); ++m)
                if (e.replacement.count(idx[m])) { hit = m; break; }
            if (hit == idx.size()) {
                next.add(idx, c);
                continue;
            }
            dirty = true;
            // e^{i_hit} -> replacement, with the sign of moving it to front
            const Form& repl = e.replacement.at(idx[hit]);
            std::vector<int> rest;
            for (size_t m = 0; m < idx.size(); ++m)
                if (m != hit) rest.push_back(idx[m]);
            for (const auto& [ridx, rc] : repl.terms()) {
                std::vector<int> full = ridx;
                full.insert(full.end(), rest.begin(), rest.end());
                ScalarExpr val = c * rc;
                if (hit % 2 == 1) val = -val;
                next.add(full, val);
            }
        }
        cur = next;
        if (!dirty) return cur;
    }
    throw Error("elimination did not terminate");
}

Form reduce_mod(const Form& a, const std::vector<Form>& gens) {
    if (gens.empty()) return a;
    return apply_eliminations(a, eliminations_for(gens));
}

// ---------------------------------------------------------------------------
// change of coframe
// ---------------------------------------------------------------------------

// forward declaration; implemented in linalg.cpp
std::vector<std::vector<ScalarExpr>> invert_matrix(const std::vector<std::vector<ScalarExpr>>& m,
                                                   const Ctx& ctx);

Form Algebra::to_basis(const Form& a, const AlgPtr& target,
                       const std::vector<std::vector<ScalarExpr>>& from_old) const {
    // from_old[j][i]: old covector j expanded in the new basis
    Form r(target);
    for (const auto& [idx, c] : a.terms()) {
        // wedge of images of the old covectors
        std::vector<std::pair<std::vector<int>, ScalarExpr>> acc{{{}, c}};
        for (int j : idx) {
            std::vector<std::pair<std::vector<int>, ScalarExpr>> nxt;
            for (const auto& [pidx, pc] : acc) {
                for (int i = 0; i < target->dim(); ++i) {
                    const ScalarExpr& m = from_old[j][i];
                    if (m.is_zero_canonical()) continue;
                    auto full = pidx;
                    full.push_back(i);
                    nxt.emplace_back(std::move(full), pc * m);
                }
            }
            acc = std::move(nxt);
        }
        for (auto& [aidx, ac] : acc) r.add(aidx, ac);
    }
    return r;
}

AlgPtr Algebra::change_basis(const std::vector<std::string>& names,
                             const std::vector<Form>& coframe,
                             std::vector<std::vector<ScalarExpr>>* to_old,
                             std::vector<std::vector<ScalarExpr>>* from_old_out) {
    if (static_cast<int>(coframe.size()) != dim())
        throw ConstructionError("coframe size mismatch");
    int n = dim();
    std::vector<std::vector<ScalarExpr>> M(n, std::vector<ScalarExpr>(n));
    for (int i = 0; i < n; ++i) {
        if (coframe[i].degree() > 1) throw ConstructionError("coframe entries must be 1-forms");
        for (int j = 0; j < n; ++j) M[i][j] = coframe[i].coefficient({j});
    }
    auto Minv = invert_matrix(M, ctx_); // old = Minv^T ... see below
    // coframe[i] = sum_j M[i][j] e^j  =>  e^j = sum_i Minv[j][i] f^i
    auto self = shared_from_this();
    AlgPtr out = Algebra::abstract(ctx_, names);
    out->mode_ = Mode::Abstract;
    for (int i = 0; i < n; ++i) {
        Form df = d(coframe[i]);
        out->d_basis_[i] = to_basis(df, out, Minv);
    }
    for (const auto& [sym, f] : d_scalar_) out->d_scalar_[sym] = to_basis(f, out, Minv);
    out->seal();
    if (to_old) *to_old = M;
    if (from_old_out) *from_old_out = Minv;
    return out;
}

// ---------------------------------------------------------------------------
// SmoothMap
// ---------------------------------------------------------------------------

SmoothMap SmoothMap::coordinate(const AlgPtr& domain, const AlgPtr& codomain,
                                const std::map<std::string, ScalarExpr>& coord_images) {
    if (codomain->mode() != Algebra::Mode::CoordinateChart)
        throw ConstructionError("codomain is not a coordinate chart");
    SmoothMap m;
    m.domain_ = domain;
    m.codomain_ = codomain;
    for (const auto& [name, img] : coord_images) {
        int sym = codomain->ctx()->symbol(name);
        m.sym_images_[sym] = img;
    }
    for (int i = 0; i < codomain->dim(); ++i) {
        // basis covector i of the chart is d of its i-th coordinate
        std::string coord = codomain->basis_names()[i].substr(1);
        auto it = m.sym_images_.find(codomain->ctx()->symbol(coord));
        if (it == m.sym_images_.end())
            throw ConstructionError("missing image for coordinate " + coord);
        Form img(domain);
        for (int sym : collect_symbols(it->second)) {
            ScalarExpr pd = it->second.differentiate(sym);
            if (pd.is_zero_canonical()) continue;
            img += domain->d_symbol(sym) * pd;
        }
        m.basis_images_[i] = img;
    }
    return m;
}

SmoothMap SmoothMap::abstract(const AlgPtr& domain, const AlgPtr& codomain,
                              const std::map<std::string, Form>& basis_images,
                              const std::map<std::string, ScalarExpr>& scalar_images,
                              bool check_d_compat) {
    SmoothMap m;
    m.domain_ = domain;
    m.codomain_ = codomain;
    for (const auto& [name, img] : basis_images)
        m.basis_images_[codomain->basis_index(name)] = img;
    for (const auto& [name, img] : scalar_images)
        m.sym_images_[codomain->ctx()->symbol(name)] = img;
    if (static_cast<int>(m.basis_images_.size()) != codomain->dim())
        throw ConstructionError("pullback table must cover the whole codomain coframe");
    if (check_d_compat) {
        for (int i = 0; i < codomain->dim(); ++i) {
            Form lhs = domain->d(m.basis_images_.at(i));
            Form rhs = m.pullback(codomain->d_basis(i));
            if (!(lhs - rhs).is_zero())
                throw ConstructionError("pullback incompatible with d on " +
                                        codomain->basis_names()[i] + ": " + (lhs - rhs).str());
        }
    }
    return m;
}

SmoothMap SmoothMap::identity(const AlgPtr& alg) {
    SmoothMap m;
    m.domain_ = alg;
    m.codomain_ = alg;
    for (int i = 0; i < alg->dim(); ++i) {
        Form f(alg);
        f.add({i}, ScalarExpr(alg->ctx(), 1));
        m.basis_images_[i] = f;
    }
    return m;
}

ScalarExpr SmoothMap::pull_scalar(const ScalarExpr& e) const {
    return e.substitute(domain_->ctx(), sym_images_);
}

Form SmoothMap::pullback(const Form& a) const {
    if (a.algebra() != codomain_) throw AlgebraMismatch("pullback of a form not on the codomain");
    Form r(domain_);
    for (const auto& [idx, c] : a.terms()) {
        Form t = domain_->scalar(pull_scalar(c));
        for (int j : idx) t = wedge(t, basis_images_.at(j));
        r += t;
    }
    return r;
}

SmoothMap SmoothMap::with_domain(const AlgPtr& new_domain,
                                 const std::function<Form(const Form&)>& transport) const {
    if (new_domain->ctx() != domain_->ctx())
        throw AlgebraMismatch("domain change must keep the scalar context");
    SmoothMap m;
    m.domain_ = new_domain;
    m.codomain_ = codomain_;
    m.sym_images_ = sym_images_;
    for (const auto& [i, img] : basis_images_) m.basis_images_[i] = transport(img);
    return m;
}

SmoothMap SmoothMap::after(const SmoothMap& other) const {
    // this: B -> C, other: A -> B; result: A -> C
    if (other.codomain_ != domain_) throw AlgebraMismatch("maps do not compose");
    SmoothMap m;
    m.domain_ = other.domain_;
    m.codomain_ = codomain_;
    for (const auto& [sym, img] : sym_images_) m.sym_images_[sym] = other.pull_scalar(img);
    for (const auto& [i, img] : basis_images_) m.basis_images_[i] = other.pullback(img);
    return m;
}

} // namespace eds
