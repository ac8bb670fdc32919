#include "eds/dsl.hpp"

#include <algorithm>
#include <sstream>

namespace eds {

// ---------------------------------------------------------------------------
// tokenizer
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    Rational number;
    int line = 1, col = 1;
};

struct Lexer {
    std::string_view src;
    size_t pos = 0;
    int line = 1, col = 1;
    Token cur;

    explicit Lexer(std::string_view s) : src(s) { advance(); }

    void bump(char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void advance() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump(c);
            } else if (c == '/' && pos + 1 < src.size() && src[pos + 1] == '/') {
                while (pos < src.size() && src[pos] != '\n') bump(src[pos]);
            } else {
                break;
            }
        }
        cur = Token{};
        cur.line = line;
        cur.col = col;
        if (pos >= src.size()) {
            cur.kind = Token::Kind::End;
            return;
        }
        char c = src[pos];
        if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos < src.size() &&
                   (isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
                id += src[pos];
                bump(src[pos]);
            }
            cur.kind = Token::Kind::Ident;
            cur.text = id;
            return;
        }
        if (isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos < src.size() && isdigit(static_cast<unsigned char>(src[pos]))) {
                num += src[pos];
                bump(src[pos]);
            }
            cur.kind = Token::Kind::Number;
            cur.number = Rational(Int(num));
            cur.text = num;
            return;
        }
        if (c == '^' && pos + 1 < src.size() && src[pos + 1] == '^') {
            bump('^');
            bump('^');
            cur.kind = Token::Kind::Punct;
            cur.text = "^^";
            return;
        }
        cur.kind = Token::Kind::Punct;
        cur.text = std::string(1, c);
        bump(c);
    }
};

struct Parser {
    Lexer lex;
    explicit Parser(std::string_view s) : lex(s) {}

    [[noreturn]] void fail(const std::string& what) {
        throw SyntaxError(lex.cur.line, lex.cur.col, what);
    }
    bool is_punct(const char* p) {
        return lex.cur.kind == Token::Kind::Punct && lex.cur.text == p;
    }
    bool is_ident(const char* p) {
        return lex.cur.kind == Token::Kind::Ident && lex.cur.text == p;
    }
    void expect_punct(const char* p) {
        if (!is_punct(p)) fail(std::string("expected '") + p + "'");
        lex.advance();
    }
    std::string expect_ident() {
        if (lex.cur.kind != Token::Kind::Ident) fail("expected identifier");
        std::string s = lex.cur.text;
        lex.advance();
        return s;
    }

    ExprPtr make(EdsExpr e) {
        e.line = lex.cur.line;
        e.col = lex.cur.col;
        return std::make_shared<EdsExpr>(std::move(e));
    }

    ExprPtr parse_primary() {
        if (lex.cur.kind == Token::Kind::Number) {
            EdsExpr e;
            e.kind = EdsExpr::Kind::Number;
            e.number = lex.cur.number;
            lex.advance();
            return make(std::move(e));
        }
        if (is_punct("(")) {
            lex.advance();
            ExprPtr inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        if (is_punct("-")) {
            lex.advance();
            EdsExpr e;
            e.kind = EdsExpr::Kind::Unary;
            e.name = "-";
            e.args.push_back(parse_primary());
            return make(std::move(e));
        }
        if (lex.cur.kind == Token::Kind::Ident) {
            std::string id = expect_ident();
            if (is_punct("(")) {
                lex.advance();
                EdsExpr e;
                e.kind = EdsExpr::Kind::Call;
                e.name = id;
                if (!is_punct(")")) {
                    e.args.push_back(parse_expr());
                    while (is_punct(",")) {
                        lex.advance();
                        e.args.push_back(parse_expr());
                    }
                }
                expect_punct(")");
                return make(std::move(e));
            }
            EdsExpr e;
            e.kind = EdsExpr::Kind::Ident;
            e.name = id;
            return make(std::move(e));
        }
        fail("expected expression");
    }

    ExprPtr parse_pow() {
        ExprPtr lhs = parse_primary();
        if (is_punct("^")) {
            lex.advance();
            EdsExpr e;
            e.kind = EdsExpr::Kind::Binary;
            e.name = "^";
            e.args = {lhs, parse_primary()};
            return make(std::move(e));
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_pow();
        while (is_punct("*") || is_punct("/") || is_punct("^^")) {
            std::string op = lex.cur.text;
            lex.advance();
            EdsExpr e;
            e.kind = EdsExpr::Kind::Binary;
            e.name = op;
            e.args = {lhs, parse_pow()};
            lhs = make(std::move(e));
        }
        return lhs;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (is_punct("+") || is_punct("-")) {
            std::string op = lex.cur.text;
            lex.advance();
            EdsExpr e;
            e.kind = EdsExpr::Kind::Binary;
            e.name = op;
            e.args = {lhs, parse_term()};
            lhs = make(std::move(e));
        }
        return lhs;
    }

    std::vector<std::string> parse_namelist() {
        std::vector<std::string> out{expect_ident()};
        while (is_punct(",")) {
            lex.advance();
            out.push_back(expect_ident());
        }
        return out;
    }

    std::vector<ExprPtr> parse_exprlist() {
        expect_punct("[");
        std::vector<ExprPtr> out;
        if (!is_punct("]")) {
            out.push_back(parse_expr());
            while (is_punct(",")) {
                lex.advance();
                out.push_back(parse_expr());
            }
        }
        expect_punct("]");
        return out;
    }

    EdsDecl parse_decl() {
        EdsDecl d;
        d.line = lex.cur.line;
        d.col = lex.cur.col;
        std::string kw = expect_ident();
        auto simple_names = [&](EdsDecl::Kind k) {
            d.kind = k;
            d.names = parse_namelist();
            expect_punct(";");
        };
        if (kw == "coord") simple_names(EdsDecl::Kind::Coord);
        else if (kw == "param") simple_names(EdsDecl::Kind::Param);
        else if (kw == "constant") simple_names(EdsDecl::Kind::Constant);
        else if (kw == "basis") simple_names(EdsDecl::Kind::Basis);
        else if (kw == "scalar") {
            d.kind = EdsDecl::Kind::Scalar;
            d.name = expect_ident();
            expect_punct("{");
            if (expect_ident() != "d") fail("expected 'd' in scalar block");
            expect_punct("=");
            d.expr = parse_expr();
            expect_punct(";");
            expect_punct("}");
        } else if (kw == "structure") {
            d.kind = EdsDecl::Kind::Structure;
            if (expect_ident() != "d") fail("expected 'd' in structure equation");
            expect_punct("(");
            d.name = expect_ident();
            expect_punct(")");
            expect_punct("=");
            d.expr = parse_expr();
            expect_punct(";");
        } else if (kw == "assume") {
            d.kind = EdsDecl::Kind::Assume;
            d.expr = parse_expr();
            std::string pred = expect_ident();
            if (pred == "nonzero" || pred == "positive") {
                d.target = pred;
            } else if (pred == "in") {
                d.target = "in";
                expect_punct("(");
                bool neg = is_punct("-");
                if (neg) lex.advance();
                if (lex.cur.kind != Token::Kind::Number) fail("expected rational bound");
                d.lo = neg ? -lex.cur.number : lex.cur.number;
                lex.advance();
                if (is_punct("/")) {
                    lex.advance();
                    d.lo /= lex.cur.number;
                    lex.advance();
                }
                expect_punct(",");
                neg = is_punct("-");
                if (neg) lex.advance();
                d.hi = neg ? -lex.cur.number : lex.cur.number;
                lex.advance();
                if (is_punct("/")) {
                    lex.advance();
                    d.hi /= lex.cur.number;
                    lex.advance();
                }
                expect_punct(")");
            } else {
                fail("expected nonzero | positive | in");
            }
            expect_punct(";");
        } else if (kw == "define" || kw == "form") {
            d.kind = kw == "define" ? EdsDecl::Kind::Define : EdsDecl::Kind::FormDef;
            d.name = expect_ident();
            expect_punct("=");
            d.expr = parse_expr();
            expect_punct(";");
        } else if (kw == "vector") {
            d.kind = EdsDecl::Kind::Vector;
            d.name = expect_ident();
            expect_punct("=");
            d.exprs = parse_exprlist();
            expect_punct(";");
        } else if (kw == "ma_system") {
            d.kind = EdsDecl::Kind::MaSystem;
            expect_punct("{");
            while (!is_punct("}")) {
                std::string key = expect_ident();
                expect_punct("=");
                if (key == "cauchy") d.name_list = parse_namelist();
                else d.fields[key] = parse_expr();
                expect_punct(";");
            }
            expect_punct("}");
        } else if (kw == "map") {
            d.kind = EdsDecl::Kind::Map;
            d.name = expect_ident();
            expect_punct(":");
            d.target = expect_ident();
            expect_punct("{");
            while (!is_punct("}")) {
                std::string key = expect_ident();
                expect_punct("=");
                d.fields[key] = parse_expr();
                expect_punct(";");
            }
            expect_punct("}");
        } else if (kw == "backlund") {
            d.kind = EdsDecl::Kind::Backlund;
            expect_punct("{");
            while (!is_punct("}")) {
                std::string key = expect_ident();
                expect_punct("=");
                if (key == "omega") d.exprs = parse_exprlist();
                else d.fields[key] = parse_expr();
                expect_punct(";");
            }
            expect_punct("}");
        } else if (kw == "claw") {
            d.kind = EdsDecl::Kind::Claw;
            d.name = expect_ident();
            expect_punct("{");
            while (!is_punct("}")) {
                std::string key = expect_ident();
                expect_punct("=");
                if (is_punct("[")) {
                    if (key == "P") d.exprs = parse_exprlist();
                    else if (key == "Q") d.exprs2 = parse_exprlist();
                    else fail("unexpected list field " + key);
                } else {
                    d.fields[key] = parse_expr();
                }
                expect_punct(";");
            }
            expect_punct("}");
        } else if (kw == "space") {
            d.kind = EdsDecl::Kind::Space;
            d.name = expect_ident();
            expect_punct("{");
            while (!is_punct("}")) d.body.push_back(parse_decl());
            expect_punct("}");
        } else {
            fail("unknown declaration: " + kw);
        }
        return d;
    }
};

// ---------------------------------------------------------------------------
// printer (canonical reprint of the AST)
// ---------------------------------------------------------------------------

void print_expr(std::ostream& os, const ExprPtr& e) {
    switch (e->kind) {
    case EdsExpr::Kind::Number: {
        os << numerator(e->number);
        if (denominator(e->number) != 1) os << "/" << denominator(e->number);
        break;
    }
    case EdsExpr::Kind::Ident:
        os << e->name;
        break;
    case EdsExpr::Kind::Unary:
        os << "(-";
        print_expr(os, e->args[0]);
        os << ")";
        break;
    case EdsExpr::Kind::Binary:
        os << "(";
        print_expr(os, e->args[0]);
        os << " " << e->name << " ";
        print_expr(os, e->args[1]);
        os << ")";
        break;
    case EdsExpr::Kind::Call:
        os << e->name << "(";
        for (size_t i = 0; i < e->args.size(); ++i) {
            if (i) os << ", ";
            print_expr(os, e->args[i]);
        }
        os << ")";
        break;
    }
}

void print_decl(std::ostream& os, const EdsDecl& d, int indent) {
    std::string pad(indent, ' ');
    auto names = [&](const char* kw) {
        os << pad << kw << " ";
        for (size_t i = 0; i < d.names.size(); ++i) {
            if (i) os << ", ";
            os << d.names[i];
        }
        os << ";\n";
    };
    switch (d.kind) {
    case EdsDecl::Kind::Coord: names("coord"); break;
    case EdsDecl::Kind::Param: names("param"); break;
    case EdsDecl::Kind::Constant: names("constant"); break;
    case EdsDecl::Kind::Basis: names("basis"); break;
    case EdsDecl::Kind::Scalar:
        os << pad << "scalar " << d.name << " { d = ";
        print_expr(os, d.expr);
        os << "; }\n";
        break;
    case EdsDecl::Kind::Structure:
        os << pad << "structure d(" << d.name << ") = ";
        print_expr(os, d.expr);
        os << ";\n";
        break;
    case EdsDecl::Kind::Assume:
        os << pad << "assume ";
        print_expr(os, d.expr);
        if (d.target == "in")
            os << " in (" << d.lo << ", " << d.hi << ")";
        else
            os << " " << d.target;
        os << ";\n";
        break;
    case EdsDecl::Kind::Define:
    case EdsDecl::Kind::FormDef:
        os << pad << (d.kind == EdsDecl::Kind::Define ? "define " : "form ") << d.name << " = ";
        print_expr(os, d.expr);
        os << ";\n";
        break;
    case EdsDecl::Kind::Vector:
        os << pad << "vector " << d.name << " = [";
        for (size_t i = 0; i < d.exprs.size(); ++i) {
            if (i) os << ", ";
            print_expr(os, d.exprs[i]);
        }
        os << "];\n";
        break;
    case EdsDecl::Kind::MaSystem:
        os << pad << "ma_system {\n";
        for (const auto& [k, v] : d.fields) {
            os << pad << "  " << k << " = ";
            print_expr(os, v);
            os << ";\n";
        }
        if (!d.name_list.empty()) {
            os << pad << "  cauchy = ";
            for (size_t i = 0; i < d.name_list.size(); ++i) {
                if (i) os << ", ";
                os << d.name_list[i];
            }
            os << ";\n";
        }
        os << pad << "}\n";
        break;
    case EdsDecl::Kind::Map:
        os << pad << "map " << d.name << " : " << d.target << " {\n";
        for (const auto& [k, v] : d.fields) {
            os << pad << "  " << k << " = ";
            print_expr(os, v);
            os << ";\n";
        }
        os << pad << "}\n";
        break;
    case EdsDecl::Kind::Backlund:
        os << pad << "backlund {\n";
        for (const auto& [k, v] : d.fields) {
            os << pad << "  " << k << " = ";
            print_expr(os, v);
            os << ";\n";
        }
        if (!d.exprs.empty()) {
            os << pad << "  omega = [";
            for (size_t i = 0; i < d.exprs.size(); ++i) {
                if (i) os << ", ";
                print_expr(os, d.exprs[i]);
            }
            os << "];\n";
        }
        os << pad << "}\n";
        break;
    case EdsDecl::Kind::Claw: {
        os << pad << "claw " << d.name << " {\n";
        for (const auto& [k, v] : d.fields) {
            os << pad << "  " << k << " = ";
            print_expr(os, v);
            os << ";\n";
        }
        auto plist = [&](const char* key, const std::vector<ExprPtr>& lst) {
            if (lst.empty()) return;
            os << pad << "  " << key << " = [";
            for (size_t i = 0; i < lst.size(); ++i) {
                if (i) os << ", ";
                print_expr(os, lst[i]);
            }
            os << "];\n";
        };
        plist("P", d.exprs);
        plist("Q", d.exprs2);
        os << pad << "}\n";
        break;
    }
    case EdsDecl::Kind::Space:
        os << pad << "space " << d.name << " {\n";
        for (const auto& b : d.body) print_decl(os, b, indent + 2);
        os << pad << "}\n";
        break;
    }
}

} // namespace

EdsDocument EdsDocument::parse(const std::string& text) {
    Parser p(text);
    EdsDocument doc;
    while (p.lex.cur.kind != Token::Kind::End) doc.decls.push_back(p.parse_decl());
    return doc;
}

std::string EdsDocument::print() const {
    std::ostringstream os;
    for (const auto& d : decls) print_decl(os, d, 0);
    return os.str();
}

// ---------------------------------------------------------------------------
// builder
// ---------------------------------------------------------------------------

namespace {

using Value = std::variant<ScalarExpr, Form>;

struct Scope {
    Ctx ctx;
    AlgPtr algebra;
    std::map<std::string, ScalarExpr> scalars; // defines + symbols by name
    std::map<std::string, Form> forms;
    std::map<std::string, VectorField> vectors;
};

[[noreturn]] void bail(const ExprPtr& e, const std::string& what) {
    throw SyntaxError(e->line, e->col, what);
}

Form d_of_scalar(const AlgPtr& alg, const ScalarExpr& s) {
    Form r(alg);
    for (int sym : collect_symbols(s)) {
        ScalarExpr pd = s.differentiate(sym);
        if (!pd.is_zero_canonical()) r += alg->d_symbol(sym) * pd;
    }
    return r;
}

Value eval_expr(Scope& sc, const ExprPtr& e);

ScalarExpr eval_scalar(Scope& sc, const ExprPtr& e) {
    Value v = eval_expr(sc, e);
    if (auto* s = std::get_if<ScalarExpr>(&v)) return *s;
    bail(e, "expected a scalar expression");
}

Form eval_form(Scope& sc, const ExprPtr& e) {
    Value v = eval_expr(sc, e);
    if (auto* f = std::get_if<Form>(&v)) return *f;
    // degree-0 promotion
    return sc.algebra->scalar(std::get<ScalarExpr>(v));
}

Value eval_expr(Scope& sc, const ExprPtr& e) {
    switch (e->kind) {
    case EdsExpr::Kind::Number:
        return ScalarExpr(sc.ctx, e->number);
    case EdsExpr::Kind::Ident: {
        auto fit = sc.forms.find(e->name);
        if (fit != sc.forms.end()) return fit->second;
        auto sit = sc.scalars.find(e->name);
        if (sit != sc.scalars.end()) return sit->second;
        if (sc.ctx->find_symbol(e->name)) return ScalarExpr::symbol(sc.ctx, e->name);
        // basis covector by name
        for (int i = 0; i < sc.algebra->dim(); ++i)
            if (sc.algebra->basis_names()[i] == e->name) return sc.algebra->covector(i);
        bail(e, "unknown identifier: " + e->name);
    }
    case EdsExpr::Kind::Unary: {
        Value v = eval_expr(sc, e->args[0]);
        if (auto* s = std::get_if<ScalarExpr>(&v)) return -*s;
        return -std::get<Form>(v);
    }
    case EdsExpr::Kind::Call: {
        const std::string& f = e->name;
        if (f == "d") {
            if (e->args.size() != 1) bail(e, "d takes one argument");
            // d(x) of a coordinate resolves through the derivative table
            Value v = eval_expr(sc, e->args[0]);
            if (auto* s = std::get_if<ScalarExpr>(&v)) return d_of_scalar(sc.algebra, *s);
            return sc.algebra->d(std::get<Form>(v));
        }
        if (e->args.size() != 1) bail(e, f + " takes one argument");
        ScalarExpr a = eval_scalar(sc, e->args[0]);
        if (f == "sin") return sin(a);
        if (f == "cos") return cos(a);
        if (f == "tan") return tan(a);
        if (f == "csc") return csc(a);
        if (f == "cot") return cot(a);
        if (f == "sinh") return sinh(a);
        if (f == "cosh") return cosh(a);
        if (f == "tanh") return tanh(a);
        if (f == "exp") return exp(a);
        if (f == "log") return log(a);
        if (f == "sqrt") return sqrt(a);
        if (f == "arctan") return arctan(a);
        throw UnsupportedAtom("unknown atom in document: " + f);
    }
    case EdsExpr::Kind::Binary: {
        if (e->name == "^") {
            ScalarExpr a = eval_scalar(sc, e->args[0]);
            Value rv = eval_expr(sc, e->args[1]);
            auto* s = std::get_if<ScalarExpr>(&rv);
            if (!s) bail(e, "exponent must be an integer");
            auto r = s->rational_value();
            if (!r || denominator(*r) != 1) bail(e, "exponent must be an integer");
            return a.pow(numerator(*r).convert_to<long long>());
        }
        Value lv = eval_expr(sc, e->args[0]);
        Value rv = eval_expr(sc, e->args[1]);
        bool lf = std::holds_alternative<Form>(lv), rf = std::holds_alternative<Form>(rv);
        if (e->name == "^^") {
            Form l = lf ? std::get<Form>(lv) : sc.algebra->scalar(std::get<ScalarExpr>(lv));
            Form r = rf ? std::get<Form>(rv) : sc.algebra->scalar(std::get<ScalarExpr>(rv));
            return wedge(l, r);
        }
        if (e->name == "+" || e->name == "-") {
            if (lf != rf) bail(e, "cannot add forms and scalars");
            if (lf) {
                Form l = std::get<Form>(lv), r = std::get<Form>(rv);
                return e->name == "+" ? l + r : l - r;
            }
            ScalarExpr l = std::get<ScalarExpr>(lv), r = std::get<ScalarExpr>(rv);
            return e->name == "+" ? l + r : l - r;
        }
        if (e->name == "*") {
            if (lf && rf) bail(e, "use ^^ for products of forms");
            if (lf) return std::get<Form>(lv) * std::get<ScalarExpr>(rv);
            if (rf) return std::get<Form>(rv) * std::get<ScalarExpr>(lv);
            return std::get<ScalarExpr>(lv) * std::get<ScalarExpr>(rv);
        }
        if (e->name == "/") {
            ScalarExpr r = std::get<ScalarExpr>(rv);
            if (lf) return std::get<Form>(lv) * (ScalarExpr(sc.ctx, 1) / r);
            return std::get<ScalarExpr>(lv) / r;
        }
        bail(e, "unknown operator " + e->name);
    }
    }
    bail(e, "unreachable");
}

// gather the declarations shaping an algebra, construct it, then evaluate
// the remaining declarations in order
void build_scope(Scope& sc, const std::vector<EdsDecl>& decls, BuiltSpace* space_out,
                 BuiltDocument* doc) {
    sc.ctx = ScalarContext::create();
    std::vector<std::string> coords, constants, basis;
    for (const auto& d : decls) {
        switch (d.kind) {
        case EdsDecl::Kind::Coord:
        case EdsDecl::Kind::Param:
            coords.insert(coords.end(), d.names.begin(), d.names.end());
            break;
        case EdsDecl::Kind::Constant:
            constants.insert(constants.end(), d.names.begin(), d.names.end());
            break;
        case EdsDecl::Kind::Basis:
            basis.insert(basis.end(), d.names.begin(), d.names.end());
            break;
        default:
            break;
        }
    }
    if (!basis.empty() && !coords.empty())
        throw ConstructionError("a space is either a coordinate chart or an abstract coframe");
    AlgPtr alg;
    if (basis.empty()) {
        alg = Algebra::coordinate_chart(sc.ctx, coords, constants);
    } else {
        for (const auto& c : constants) sc.ctx->add_symbol(c);
        alg = Algebra::abstract(sc.ctx, basis);
    }
    sc.algebra = alg;

    bool sealed = basis.empty();
    auto ensure_sealed = [&]() {
        if (!sealed) {
            for (const auto& c : constants) alg->set_scalar_differential(c, Form(alg));
            alg->seal();
            sealed = true;
        }
    };

    for (const auto& d : decls) {
        switch (d.kind) {
        case EdsDecl::Kind::Coord:
        case EdsDecl::Kind::Param:
        case EdsDecl::Kind::Constant:
        case EdsDecl::Kind::Basis:
            break;
        case EdsDecl::Kind::Structure:
            alg->set_structure(d.name, eval_form(sc, d.expr));
            break;
        case EdsDecl::Kind::Scalar:
            // the symbol may appear in its own differential (e.g. exponentials)
            if (!sc.ctx->find_symbol(d.name)) sc.ctx->add_symbol(d.name);
            alg->set_scalar_differential(d.name, eval_form(sc, d.expr));
            break;
        case EdsDecl::Kind::Assume: {
            ensure_sealed();
            ScalarExpr e = eval_scalar(sc, d.expr);
            if (d.target == "nonzero") sc.ctx->registry().assume(e, Pred::Nonzero);
            else if (d.target == "positive") sc.ctx->registry().assume(e, Pred::Positive);
            else sc.ctx->registry().assume_interval(e, d.lo, d.hi);
            break;
        }
        case EdsDecl::Kind::Define:
            ensure_sealed();
            sc.scalars[d.name] = eval_scalar(sc, d.expr);
            break;
        case EdsDecl::Kind::FormDef:
            ensure_sealed();
            sc.forms[d.name] = eval_form(sc, d.expr);
            break;
        case EdsDecl::Kind::Vector: {
            ensure_sealed();
            if (static_cast<int>(d.exprs.size()) != alg->dim())
                throw ConstructionError("vector components must match the coframe dimension");
            VectorField v{alg, {}};
            for (int i = 0; i < alg->dim(); ++i) {
                ScalarExpr c = eval_scalar(sc, d.exprs[i]);
                if (!c.is_zero_canonical()) v.components[i] = c;
            }
            sc.vectors[d.name] = v;
            break;
        }
        case EdsDecl::Kind::MaSystem: {
            ensure_sealed();
            if (!space_out) throw ConstructionError("ma_system must appear inside a space block");
            Form theta = eval_form(sc, d.fields.at("theta"));
            Form psi = eval_form(sc, d.fields.at("psi"));
            std::optional<Form> claw;
            if (d.fields.count("claw_form")) claw = eval_form(sc, d.fields.at("claw_form"));
            std::vector<int> cauchy;
            for (const auto& n : d.name_list) cauchy.push_back(alg->basis_index(n));
            space_out->system = MongeAmpereSystem(alg, theta, psi, cauchy, claw);
            break;
        }
        case EdsDecl::Kind::Space: {
            ensure_sealed();
            if (!doc) throw ConstructionError("nested space blocks are not supported");
            Scope inner;
            BuiltSpace bs;
            build_scope(inner, d.body, &bs, nullptr);
            bs.algebra = inner.algebra;
            bs.scalars = inner.scalars;
            bs.forms = inner.forms;
            bs.vectors = inner.vectors;
            doc->spaces[d.name] = bs;
            break;
        }
        case EdsDecl::Kind::Map: {
            ensure_sealed();
            if (!doc) throw ConstructionError("map blocks belong to the top level");
            auto it = doc->spaces.find(d.target);
            if (it == doc->spaces.end())
                throw ConstructionError("map target space not declared: " + d.target);
            const BuiltSpace& target = it->second;
            if (target.algebra->mode() == Algebra::Mode::CoordinateChart) {
                std::map<std::string, ScalarExpr> images;
                for (const auto& [k, v] : d.fields) images[k] = eval_scalar(sc, v);
                doc->maps[d.name] = SmoothMap::coordinate(sc.algebra, target.algebra, images);
            } else {
                std::map<std::string, Form> fimages;
                for (const auto& [k, v] : d.fields) fimages[k] = eval_form(sc, v);
                doc->maps[d.name] = SmoothMap::abstract(sc.algebra, target.algebra, fimages, {});
            }
            break;
        }
        case EdsDecl::Kind::Backlund: {
            ensure_sealed();
            if (!doc) throw ConstructionError("backlund blocks belong to the top level");
            ParametricBT bt;
            bt.P = sc.algebra;
            bt.zeta = eval_form(sc, d.fields.at("zeta"));
            auto map_of = [&](const char* key) {
                const ExprPtr& ex = d.fields.at(key);
                if (ex->kind != EdsExpr::Kind::Ident) bail(ex, "expected a map name");
                auto mit = doc->maps.find(ex->name);
                if (mit == doc->maps.end()) bail(ex, "unknown map: " + ex->name);
                return mit->second;
            };
            bt.pi1 = map_of("side1");
            bt.pi2 = map_of("side2");
            auto sys_of = [&](const SmoothMap& m) {
                for (auto& [name, sp] : doc->spaces)
                    if (sp.algebra == m.codomain() && sp.system) return *sp.system;
                throw ConstructionError("side space has no ma_system");
            };
            bt.I1 = sys_of(bt.pi1);
            bt.I2 = sys_of(bt.pi2);
            doc->bt = bt;
            SectionCoframe cf;
            cf.zeta = bt.zeta;
            cf.theta1 = eval_form(sc, d.fields.at("theta1"));
            cf.theta2 = eval_form(sc, d.fields.at("theta2"));
            if (d.exprs.size() != 4)
                throw ConstructionError("backlund block needs omega = [w1, w2, w3, w4]");
            for (int i = 0; i < 4; ++i) cf.omega[i] = eval_form(sc, d.exprs[i]);
            doc->section = cf;
            break;
        }
        case EdsDecl::Kind::Claw: {
            ensure_sealed();
            if (!doc) throw ConstructionError("claw blocks belong to the top level");
            ClawCase cc;
            cc.name = d.name;
            const ExprPtr& sideex = d.fields.at("side");
            if (sideex->kind == EdsExpr::Kind::Ident && sideex->name == "J") {
                cc.side = 0;
                if (d.exprs.size() != 4 || d.exprs2.size() != 4)
                    throw ConstructionError("slice claws need P = [..] and Q = [..] of length 4");
                JClaw j;
                for (int i = 0; i < 4; ++i) {
                    j.P[i] = eval_scalar(sc, d.exprs[i]);
                    j.Q[i] = eval_scalar(sc, d.exprs2[i]);
                }
                j.R = eval_scalar(sc, d.fields.at("R"));
                cc.jclaw = j;
            } else {
                Value v = eval_expr(sc, sideex);
                auto n = std::get<ScalarExpr>(v).rational_value();
                if (!n || (*n != 1 && *n != 2)) bail(sideex, "side must be 1, 2 or J");
                cc.side = static_cast<int>(numerator(*n).convert_to<long long>());
                // side-claw expressions are written in that space's scope
                AlgPtr target;
                if (auto sit = d.fields.find("space"); sit != d.fields.end()) {
                    cc.space = sit->second->name;
                    target = doc->spaces.at(cc.space).algebra;
                } else {
                    if (!doc->bt) throw ConstructionError("side claws need a backlund block");
                    target = (cc.side == 1 ? doc->bt->pi1 : doc->bt->pi2).codomain();
                }
                Scope side_scope;
                side_scope.ctx = target->ctx();
                side_scope.algebra = target;
                for (auto& [name, sp] : doc->spaces)
                    if (sp.algebra == target) {
                        if (cc.space.empty()) cc.space = name;
                        side_scope.scalars = sp.scalars;
                        side_scope.forms = sp.forms;
                    }
                cc.Q = eval_scalar(side_scope, d.fields.at("Q"));
            }
            doc->claws.push_back(cc);
            break;
        }
        }
    }
    ensure_sealed();
}

} // namespace

ScalarExpr parse_scalar(const BuiltDocument& built, const std::string& text) {
    Parser p(text);
    ExprPtr e = p.parse_expr();
    Scope sc;
    sc.ctx = built.ctx;
    sc.algebra = built.algebra;
    sc.scalars = built.scalars;
    sc.forms = built.forms;
    return eval_scalar(sc, e);
}

BuiltDocument build_document(const EdsDocument& doc) {
    BuiltDocument out;
    Scope sc;
    build_scope(sc, doc.decls, nullptr, &out);
    out.ctx = sc.ctx;
    out.algebra = sc.algebra;
    out.scalars = sc.scalars;
    out.forms = sc.forms;
    out.vectors = sc.vectors;
    return out;
}

} // namespace eds
