#ifndef EDS_DSL_HPP
#define EDS_DSL_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eds/claws.hpp"
#include "eds/fixtures.hpp"

namespace eds {

// ---------------------------------------------------------------------------
// Surface syntax for system definitions.  Declarations end with ';';
// operators are + - * / ^ with ^^ for the wedge product and d(...) for the
// exterior derivative.
// ---------------------------------------------------------------------------

struct EdsExpr;
using ExprPtr = std::shared_ptr<EdsExpr>;

struct EdsExpr {
    enum class Kind { Number, Ident, Unary, Binary, Call };
    Kind kind;
    Rational number;
    std::string name; // Ident / Call name / Binary-Unary operator token
    std::vector<ExprPtr> args;
    int line = 0, col = 0;
};

struct EdsDecl {
    enum class Kind {
        Coord, Param, Constant, Basis, Scalar, Structure, Assume, Define,
        FormDef, Vector, MaSystem, Map, Backlund, Claw, Space
    };
    Kind kind;
    std::vector<std::string> names;  // declared identifiers
    std::string name;                // primary name (scalar/define/form/...)
    std::string target;              // map target space; assume predicate
    ExprPtr expr;                    // single expression payload
    std::vector<ExprPtr> exprs;      // list payload (vector comps, omega, P)
    std::vector<ExprPtr> exprs2;     // second list payload (slice-claw Q)
    std::map<std::string, ExprPtr> fields; // named sub-assignments
    std::vector<std::string> name_list;    // cauchy list, section names
    Rational lo, hi;                 // interval bounds
    std::vector<EdsDecl> body;       // space blocks
    int line = 0, col = 0;
};

struct EdsDocument {
    std::vector<EdsDecl> decls;

    static EdsDocument parse(const std::string& text); // throws SyntaxError
    std::string print() const;                         // canonical reprint
    bool same(const EdsDocument& o) const { return print() == o.print(); }
};

// ---------------------------------------------------------------------------
// Evaluated document
// ---------------------------------------------------------------------------

struct BuiltSpace {
    AlgPtr algebra;
    std::map<std::string, ScalarExpr> scalars;
    std::map<std::string, Form> forms;
    std::map<std::string, VectorField> vectors;
    std::optional<MongeAmpereSystem> system;
};

struct ClawCase {
    std::string name;
    int side = 0;      // 1, 2, or 0 for a slice (J) claw
    std::string space; // resolved space of a side claw
    ScalarExpr Q;      // side claws
    std::optional<JClaw> jclaw;
};

struct BuiltDocument {
    Ctx ctx;
    AlgPtr algebra;
    std::map<std::string, ScalarExpr> scalars;
    std::map<std::string, Form> forms;
    std::map<std::string, VectorField> vectors;
    std::map<std::string, BuiltSpace> spaces;
    std::map<std::string, SmoothMap> maps;
    std::optional<ParametricBT> bt;
    std::optional<SectionCoframe> section;
    std::vector<ClawCase> claws;
};

BuiltDocument build_document(const EdsDocument& doc);

// parse and evaluate a scalar expression against a built document's
// top-level scope (used by the CLI's --assume flag)
ScalarExpr parse_scalar(const BuiltDocument& built, const std::string& text);

} // namespace eds

#endif
