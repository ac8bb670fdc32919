#ifndef EDS_SCALAR_HPP
#define EDS_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "eds/errors.hpp"

namespace eds {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class ScalarExpr;
class ScalarContext;

// ---------------------------------------------------------------------------
// Generators of the coefficient ring.
//
// Every scalar is a fraction of polynomials in "generators": declared symbols
// plus atom applications (sin z, cos z, sinh u, cosh u, sqrt(...), opaque
// atoms).  Trig and hyperbolic atoms of integer-linear arguments are expanded
// over single-symbol angles, so sin(2z) = 2 sin z cos z and the addition
// formulas hold by construction; the remaining relations (sin^2 -> 1 - cos^2,
// sinh^2 -> cosh^2 - 1, sqrt(a)^2 -> a when a is registered positive, and
// exp(a)exp(b) -> exp(a+b)) are monomial rewrites.
// ---------------------------------------------------------------------------

enum class GenKind { Sym, Sin, Cos, Sinh, Cosh, Sqrt, Opaque };

// argument of an exp(...) factor: rational-linear form in symbols plus a
// rational constant (symbol id -1)
struct LinForm {
    std::vector<std::pair<int, Rational>> terms; // sorted by symbol id

    bool empty() const { return terms.empty(); }
    auto operator<=>(const LinForm&) const = default;
    LinForm operator+(const LinForm& o) const;
    LinForm operator-() const;
};

struct Monomial {
    std::vector<std::pair<int, int>> factors; // (gen id, exponent>0), sorted by gen
    LinForm exparg;                           // empty when no exp factor

    bool is_one() const { return factors.empty() && exparg.empty(); }
    int degree() const;
    int exponent_of(int gen) const;

    // graded lexicographic order (earlier generators rank higher), so the
    // map's last entry is the leading term and exact division is greedy
    bool operator<(const Monomial& o) const;
    bool operator==(const Monomial& o) const {
        return factors == o.factors && exparg == o.exparg;
    }
};

struct Poly {
    std::map<Monomial, Rational> terms;

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const;
    std::optional<Rational> constant_value() const;
    void add_term(const Monomial& m, const Rational& c);

    Poly operator+(const Poly&) const;
    Poly operator-(const Poly&) const;
    Poly operator-() const;
    Poly& operator+=(const Poly&);
    bool operator==(const Poly& o) const { return terms == o.terms; }
};

struct Fraction {
    Poly num, den; // den: relation-free generators only, normalized
};

// ---------------------------------------------------------------------------
// Assumptions: registered domain facts backing certified zero/sign tests.
// ---------------------------------------------------------------------------

enum class Pred { Nonzero, Positive, OpenInterval };

enum class ZeroTest { Zero, NonzeroByAssumption, Unknown };

class AssumptionRegistry {
public:
    void assume(const ScalarExpr& e, Pred pred);
    void assume_interval(const ScalarExpr& e, const Rational& lo, const Rational& hi);
    void seal() { sealed_ = true; }
    bool sealed() const { return sealed_; }

    struct Entry {
        std::shared_ptr<const Fraction> expr;
        Pred pred;
        Rational lo, hi; // OpenInterval only
    };
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
    bool sealed_ = false;
};

// ---------------------------------------------------------------------------
// Context: symbol table, generator table, registry.  Shared by every scalar
// of one analysis session; expressions from different contexts never mix.
// ---------------------------------------------------------------------------

class ScalarContext : public std::enable_shared_from_this<ScalarContext> {
public:
    struct Gen {
        GenKind kind;
        int sym = -1;                          // Sin/Cos/Sinh/Cosh argument
        std::string name;                      // Sym name or Opaque atom name
        Poly sqrt_arg;                         // Sqrt argument (polynomial)
        bool sqrt_rewrite = false;             // s^2 -> sqrt_arg enabled
        std::shared_ptr<const Fraction> opaque_arg;
    };

    static std::shared_ptr<ScalarContext> create();

    int add_symbol(const std::string& name);
    int symbol(const std::string& name) const; // throws if missing
    std::optional<int> find_symbol(const std::string& name) const;
    const std::string& symbol_name(int sym) const;
    int num_symbols() const { return static_cast<int>(symbols_.size()); }
    int sym_gen(int sym) const { return sym_gens_.at(sym); }

    // generators are created on demand (grow-only table)
    int trig_gen(GenKind kind, int sym) const;
    int sqrt_gen(const Poly& arg, bool rewrite) const;
    int opaque_gen(const std::string& atom, const ScalarExpr& arg) const;

    const Gen& gen(int id) const { return gens_[id]; }

    AssumptionRegistry& registry() { return registry_; }
    const AssumptionRegistry& registry() const { return registry_; }

    // certified sign facts (sound, incomplete)
    bool certify_nonzero(const Fraction& f) const;
    bool certify_positive(const Fraction& f) const;

private:
    ScalarContext() = default;
    bool poly_nonneg(const Poly& p) const;
    bool poly_positive(const Poly& p) const;
    bool gen_positive(int gen) const;
    bool gen_nonzero(int gen) const;
    bool poly_nonzero(const Poly& p, int depth) const;

    std::vector<std::string> symbols_;
    std::map<std::string, int> symbol_ids_;
    std::vector<int> sym_gens_;
    mutable std::deque<Gen> gens_;
    mutable std::map<std::pair<GenKind, int>, int> trig_lookup_;
    mutable std::mutex gen_mutex_;
    AssumptionRegistry registry_;
};

using Ctx = std::shared_ptr<ScalarContext>;

// ---------------------------------------------------------------------------
// ScalarExpr: immutable, canonical by construction.
// ---------------------------------------------------------------------------

class ScalarExpr {
public:
    ScalarExpr() = default;
    ScalarExpr(const Ctx& ctx, const Rational& value);
    ScalarExpr(const Ctx& ctx, long long value) : ScalarExpr(ctx, Rational(value)) {}
    static ScalarExpr symbol(const Ctx& ctx, const std::string& name);
    static ScalarExpr from_fraction(const Ctx& ctx, Fraction f);
    static ScalarExpr from_gen(const Ctx& ctx, int gen);

    bool valid() const { return static_cast<bool>(frac_); }
    const Ctx& ctx() const { return ctx_; }
    const Fraction& fraction() const { return *frac_; }
    std::shared_ptr<const Fraction> fraction_ptr() const { return frac_; }

    ScalarExpr operator+(const ScalarExpr&) const;
    ScalarExpr operator-(const ScalarExpr&) const;
    ScalarExpr operator*(const ScalarExpr&) const;
    ScalarExpr operator/(const ScalarExpr&) const; // divisor must not be canonically zero
    ScalarExpr operator-() const;
    ScalarExpr pow(long long e) const;

    ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
    ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }
    ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }

    bool is_zero_canonical() const { return frac_->num.is_zero(); }
    bool is_one() const;
    std::optional<Rational> rational_value() const;
    ZeroTest is_zero() const;

    ScalarExpr differentiate(int sym) const;
    ScalarExpr differentiate(const std::string& sym) const;
    ScalarExpr substitute(const Ctx& dst, const std::map<int, ScalarExpr>& images) const;
    double evaluate(const std::map<int, double>& point) const;

    std::string str() const;
    bool identical(const ScalarExpr& o) const;

private:
    Ctx ctx_;
    std::shared_ptr<const Fraction> frac_;
};

// atom constructors
ScalarExpr sin(const ScalarExpr&);
ScalarExpr cos(const ScalarExpr&);
ScalarExpr tan(const ScalarExpr&);
ScalarExpr csc(const ScalarExpr&);
ScalarExpr cot(const ScalarExpr&);
ScalarExpr sinh(const ScalarExpr&);
ScalarExpr cosh(const ScalarExpr&);
ScalarExpr tanh(const ScalarExpr&);
ScalarExpr exp(const ScalarExpr&);
ScalarExpr log(const ScalarExpr&);
ScalarExpr sqrt(const ScalarExpr&);
ScalarExpr arctan(const ScalarExpr&);

// polynomial helpers shared with the linear-algebra layer
Poly poly_one();
Poly poly_const(const Rational&);
Poly poly_mul(const Poly&, const Poly&, const ScalarContext&);
Poly poly_gcd(const Poly&, const Poly&);
std::optional<Poly> poly_divide_exact(const Poly&, const Poly&);
Fraction normalize_fraction(Poly num, Poly den, const ScalarContext&);

} // namespace eds

#endif
