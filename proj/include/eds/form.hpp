#ifndef EDS_FORM_HPP
#define EDS_FORM_HPP

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "eds/scalar.hpp"

namespace eds {

class Algebra;
using AlgPtr = std::shared_ptr<Algebra>;

// ---------------------------------------------------------------------------
// DifferentialForm: graded sum of wedge monomials over a coframe basis.
// Index tuples are strictly increasing; zero coefficients are absent.
// ---------------------------------------------------------------------------

class Form {
public:
    Form() = default;
    explicit Form(AlgPtr alg) : alg_(std::move(alg)) {}

    const AlgPtr& algebra() const { return alg_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const; // throws on mixed degree; 0 for the zero form
    const std::map<std::vector<int>, ScalarExpr>& terms() const { return terms_; }

    void add(const std::vector<int>& idx, const ScalarExpr& c); // sorts, tracks sign
    ScalarExpr coefficient(const std::vector<int>& idx) const;

    Form operator+(const Form&) const;
    Form operator-(const Form&) const;
    Form operator-() const;
    Form operator*(const ScalarExpr&) const;
    Form& operator+=(const Form& o) { return *this = *this + o; }
    Form& operator-=(const Form& o) { return *this = *this - o; }

    bool identical(const Form& o) const;
    std::string str() const;

private:
    AlgPtr alg_;
    std::map<std::vector<int>, ScalarExpr> terms_;
    friend Form wedge(const Form&, const Form&);
    friend class Algebra;
};

Form wedge(const Form& a, const Form& b);

// ---------------------------------------------------------------------------
// VectorField: components in the frame dual to the coframe basis.
// ---------------------------------------------------------------------------

struct VectorField {
    AlgPtr alg;
    std::map<int, ScalarExpr> components; // basis index -> component

    ScalarExpr component(int idx) const;
};

Form interior_product(const VectorField& v, const Form& a);
Form lie_derivative(const VectorField& v, const Form& a);

// ---------------------------------------------------------------------------
// CoframeAlgebra: declared basis 1-forms with structure equations and a
// derivative table for scalar symbols.  d^2 = 0 is checked at seal time.
// ---------------------------------------------------------------------------

class Algebra : public std::enable_shared_from_this<Algebra> {
public:
    enum class Mode { CoordinateChart, Abstract };

    // coordinate chart: basis {d<coord>}, d(basis) = 0, derivative table from
    // the coordinates; extra constants get zero differentials
    static AlgPtr coordinate_chart(const Ctx& ctx, const std::vector<std::string>& coords,
                                   const std::vector<std::string>& constants = {});

    // abstract coframe: structure equations supplied afterwards, then seal()
    static AlgPtr abstract(const Ctx& ctx, const std::vector<std::string>& basis);

    void set_structure(const std::string& basis_name, const Form& d2form);
    void set_scalar_differential(const std::string& sym, const Form& d1form);
    void seal(); // verifies d^2 = 0 on every basis form and tabled symbol

    const Ctx& ctx() const { return ctx_; }
    Mode mode() const { return mode_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<std::string>& basis_names() const { return basis_; }
    int basis_index(const std::string& name) const;

    Form covector(int idx);               // e^idx as a 1-form
    Form covector(const std::string& name);
    Form zero() { return Form(shared_from_this()); }
    Form scalar(const ScalarExpr& c);     // degree-0 form
    Form one() { return scalar(ScalarExpr(ctx_, 1)); }

    Form d(const Form& a) const;          // exterior derivative
    Form d_symbol(int sym) const;         // tabled differential of a symbol
    bool has_symbol_differential(int sym) const;
    const Form& d_basis(int idx) const { return d_basis_.at(idx); }

    // new algebra whose basis is the given coframe (forms on *this); returns
    // the new algebra; out parameters give the change matrices
    AlgPtr change_basis(const std::vector<std::string>& names, const std::vector<Form>& coframe,
                        std::vector<std::vector<ScalarExpr>>* to_old = nullptr,
                        std::vector<std::vector<ScalarExpr>>* from_old = nullptr);

    // re-express a form on *this in the changed algebra (basis = coframe)
    Form to_basis(const Form& a, const AlgPtr& target,
                  const std::vector<std::vector<ScalarExpr>>& from_old) const;

private:
    Algebra() = default;
    Form d_term(const std::vector<int>& idx, const ScalarExpr& c) const;

    Ctx ctx_;
    Mode mode_ = Mode::Abstract;
    std::vector<std::string> basis_;
    std::map<std::string, int> basis_ids_;
    std::vector<Form> d_basis_;
    std::map<int, Form> d_scalar_;
    bool sealed_ = false;
};

// ---------------------------------------------------------------------------
// reduce_mod: normal form of a modulo the algebraic ideal of the given
// 1-forms.  Leading directions are the lowest basis indices carrying a
// certified-nonzero coefficient.
// ---------------------------------------------------------------------------

struct Eliminations {
    std::map<int, Form> replacement; // eliminated direction -> 1-form
};

Eliminations eliminations_for(const std::vector<Form>& gens);
Form apply_eliminations(const Form& a, const Eliminations& e);
Form reduce_mod(const Form& a, const std::vector<Form>& gens);

// ---------------------------------------------------------------------------
// SmoothMap phi: domain -> codomain, acting on forms by pullback.
// ---------------------------------------------------------------------------

class SmoothMap {
public:
    SmoothMap() = default;
    // coordinate-chart codomain: images of its coordinates as domain scalars
    static SmoothMap coordinate(const AlgPtr& domain, const AlgPtr& codomain,
                                const std::map<std::string, ScalarExpr>& coord_images);
    // abstract codomain: images of basis covectors (and of tabled scalars)
    static SmoothMap abstract(const AlgPtr& domain, const AlgPtr& codomain,
                              const std::map<std::string, Form>& basis_images,
                              const std::map<std::string, ScalarExpr>& scalar_images,
                              bool check_d_compat = true);
    static SmoothMap identity(const AlgPtr& alg);

    const AlgPtr& domain() const { return domain_; }
    const AlgPtr& codomain() const { return codomain_; }

    Form pullback(const Form& a) const;
    ScalarExpr pull_scalar(const ScalarExpr& e) const;

    // composite of phi: A->B (this after other): other: A->B, this: B->C
    SmoothMap after(const SmoothMap& other) const;

    // same map with its pullback data transported to another presentation of
    // the domain (scalar context unchanged)
    SmoothMap with_domain(const AlgPtr& new_domain,
                          const std::function<Form(const Form&)>& transport) const;

private:
    AlgPtr domain_, codomain_;
    std::map<int, ScalarExpr> sym_images_;  // codomain symbol -> domain scalar
    std::map<int, Form> basis_images_;      // codomain basis index -> domain 1-form
};

// collect every symbol appearing in an expression (including inside atoms)
std::set<int> collect_symbols(const ScalarExpr& e);

} // namespace eds

#endif
