#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "eds/claws.hpp"
#include "eds/dsl.hpp"
#include "eds/pfaffian.hpp"
#include "eds/report.hpp"

using namespace eds;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string zt(ZeroTest z) {
    switch (z) {
    case ZeroTest::Zero: return "zero";
    case ZeroTest::NonzeroByAssumption: return "nonzero";
    default: return "unknown";
    }
}

std::string verdict_str(Verdict v) {
    switch (v) {
    case Verdict::Zero: return "zero";
    case Verdict::NonzeroCertified: return "nonzero (certified)";
    default: return "nonzero (generic)";
    }
}

struct Session {
    std::string path, format;
    unsigned seed = 0;
    int max_degree = 0;
    std::vector<std::string> assumptions;
    EdsDocument doc;
    BuiltDocument built;

    void load() {
        doc = EdsDocument::parse(slurp(path));
        built = build_document(doc);
        for (const auto& a : assumptions) {
            auto pos = a.find(':');
            std::string expr = pos == std::string::npos ? a : a.substr(0, pos);
            std::string pred = pos == std::string::npos ? "nonzero" : a.substr(pos + 1);
            ScalarExpr e = parse_scalar(built, expr);
            built.ctx->registry().assume(e, pred == "positive" ? Pred::Positive : Pred::Nonzero);
        }
        if (max_degree > 0) {
            for (const auto& [name, f] : built.forms)
                if (!f.is_zero() && f.degree() > max_degree)
                    throw ConstructionError("form " + name + " exceeds --max-degree");
        }
    }

    JClawSpace jspace() {
        if (!built.bt || !built.section) throw ConstructionError("document has no backlund block");
        return jclaw_space(*built.bt, *built.section);
    }

    void emit(const Report& r) {
        if (format == "json") std::cout << r.json();
        else std::cout << r.text();
        std::exit(r.exit_code());
    }
};

void randomized_identities(Session& s, Report& rep) {
    std::mt19937 rng(s.seed);
    const AlgPtr& alg = s.built.algebra;
    const Ctx& ctx = s.built.ctx;
    std::vector<ScalarExpr> pool{ScalarExpr(ctx, 1), ScalarExpr(ctx, -3)};
    for (int i = 0; i < ctx->num_symbols() && i < 6; ++i)
        pool.push_back(ScalarExpr::from_gen(ctx, ctx->sym_gen(i)));
    auto rand_form = [&](int degree) {
        Form f(alg);
        for (int t = 0; t < 3; ++t) {
            std::vector<int> idx;
            while (static_cast<int>(idx.size()) < degree) {
                int k = static_cast<int>(rng() % alg->dim());
                if (std::find(idx.begin(), idx.end(), k) == idx.end()) idx.push_back(k);
            }
            f.add(idx, pool[rng() % pool.size()]);
        }
        return f;
    };
    bool ok = true;
    for (int i = 0; i < 20 && ok; ++i) {
        Form a = rand_form(1 + static_cast<int>(rng() % 2));
        Form b = rand_form(1);
        if (!alg->d(alg->d(a)).is_zero()) ok = false;
        Form lhs = alg->d(wedge(a, b));
        Form rhs = wedge(alg->d(a), b) +
                   (a.degree() % 2 == 0 ? wedge(a, alg->d(b)) : -wedge(a, alg->d(b)));
        if (!(lhs - rhs).is_zero()) ok = false;
    }
    if (ok) rep.pass("randomized d^2 and Leibniz identities", "seed " + std::to_string(s.seed));
    else rep.fail("randomized d^2 and Leibniz identities");
}

void cmd_check(Session& s) {
    Report rep;
    rep.command = "check";
    rep.fixture = s.path;
    rep.pass("algebra construction", "d^2 = 0 on the declared coframe");
    for (const auto& [name, sp] : s.built.spaces) {
        rep.pass("space " + name, "d^2 = 0");
        if (sp.system) rep.pass("space " + name + " system", "contact and independence conditions");
    }
    if (s.built.bt && s.built.section) {
        SectionCheck chk = check_section(*s.built.bt, *s.built.section);
        if (chk.ok) {
            rep.pass("section conditions", "A1 = " + chk.A1.str() + ", A2 = " + chk.A2.str());
        } else {
            rep.fail("section conditions", chk.failure);
        }
    }
    if (s.seed != 0) randomized_identities(s, rep);
    s.emit(rep);
}

void cmd_torsion(Session& s) {
    Report rep;
    rep.command = "torsion";
    rep.fixture = s.path;
    if (!s.built.bt || !s.built.section) throw ConstructionError("document has no backlund block");
    TorsionTable t = extract_torsion(*s.built.bt, *s.built.section);
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("A1", t.A1.str());
    rows.emplace_back("A2", t.A2.str());
    for (int i = 0; i < 4; ++i) rows.emplace_back("B" + std::to_string(i + 1), t.B[i].str());
    for (int i = 0; i < 4; ++i) rows.emplace_back("C" + std::to_string(i + 1), t.C[i].str());
    for (int i = 0; i < 4; ++i) rows.emplace_back("D" + std::to_string(i + 1), t.D[i].str());
    for (int i = 0; i < 4; ++i) rows.emplace_back("E" + std::to_string(i + 1), t.E[i].str());
    rows.emplace_back("F1", t.F1.str());
    rows.emplace_back("F2", t.F2.str());
    rep.tables.emplace_back("torsion", rows);
    rep.pass("torsion extracted");
    s.emit(rep);
}

void cmd_classify(Session& s) {
    Report rep;
    rep.command = "classify";
    rep.fixture = s.path;
    if (!s.built.bt || !s.built.section) throw ConstructionError("document has no backlund block");
    TorsionTable t = extract_torsion(*s.built.bt, *s.built.section);
    InvariantReport r = classify(t);
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("B12", verdict_str(r.B12));
    rows.emplace_back("B34", verdict_str(r.B34));
    rows.emplace_back("C12", verdict_str(r.C12));
    rows.emplace_back("C34", verdict_str(r.C34));
    rows.emplace_back("D12", verdict_str(r.D12));
    rows.emplace_back("D34", verdict_str(r.D34));
    rows.emplace_back("E12", verdict_str(r.E12));
    rows.emplace_back("E34", verdict_str(r.E34));
    rows.emplace_back("dep(B,C) side 1", zt(r.dep_BC1));
    rows.emplace_back("dep(B,C) side 2", zt(r.dep_BC2));
    rows.emplace_back("dep(C,E) side 1", zt(r.dep_CE1));
    rows.emplace_back("dep(C,E) side 2", zt(r.dep_CE2));
    rows.emplace_back("D.B side 1", zt(r.dot_DB1));
    rows.emplace_back("D.B side 2", zt(r.dot_DB2));
    rows.emplace_back("D.C side 1", zt(r.dot_DC1));
    rows.emplace_back("D.C side 2", zt(r.dot_DC2));
    rows.emplace_back("D.E side 1", zt(r.dot_DE1));
    rows.emplace_back("D.E side 2", zt(r.dot_DE2));
    rows.emplace_back("F1", zt(r.F1));
    rows.emplace_back("F2", zt(r.F2));
    rows.emplace_back("A1*A2", r.A1A2.str());
    rows.emplace_back("triple 1 spans a line", r.triple1_spans_line ? "yes" : "no");
    rows.emplace_back("triple 2 spans a line", r.triple2_spans_line ? "yes" : "no");
    rows.emplace_back("genuinely parametric", r.genuinely_parametric ? "yes" : "no");
    rows.emplace_back("holonomic", r.holonomic ? "yes" : "no");
    rep.tables.emplace_back("classification", rows);
    PropositionReport pr = check_propositions(t);
    if (pr.consistent) rep.pass("structure-equation implications");
    else
        for (const auto& v : pr.violations) rep.fail("structure-equation implication", v);
    s.emit(rep);
}

void cmd_characteristics(Session& s, int side) {
    Report rep;
    rep.command = "characteristics";
    rep.fixture = s.path;
    const MongeAmpereSystem* sys = nullptr;
    if (s.built.bt) sys = side == 2 ? &s.built.bt->I2 : &s.built.bt->I1;
    else {
        for (const auto& [name, sp] : s.built.spaces)
            if (sp.system) { sys = &*sp.system; break; }
    }
    if (!sys) throw ConstructionError("no Monge-Ampere system in the document");
    std::vector<RootPair> roots;
    if (!is_hyperbolic(*sys, &roots)) {
        rep.fail("hyperbolic", "no pair of independent real roots");
        s.emit(rep);
    }
    rep.pass("hyperbolic", "[" + roots[0].mu.str() + " : " + roots[0].nu.str() + "], [" +
                               roots[1].mu.str() + " : " + roots[1].nu.str() + "]");
    auto cp = characteristic_systems(*sys);
    std::vector<std::pair<std::string, std::string>> rows;
    int k = 1;
    for (const PfaffianSystem* c : {&cp.C1, &cp.C2}) {
        int j = 1;
        for (const auto& g : c->generators())
            rows.emplace_back("C" + std::to_string(k) + "." + std::to_string(j++), g.str());
        ++k;
    }
    rep.tables.emplace_back("characteristic systems", rows);
    s.emit(rep);
}

void cmd_derived(Session& s, const std::string& system) {
    Report rep;
    rep.command = "derived";
    rep.fixture = s.path;
    if (!s.built.bt) throw ConstructionError("document has no backlund block");
    int side = system[1] == '1' ? 1 : 2;
    int which = system[2] == '1' ? 1 : 2;
    const MongeAmpereSystem& sys = side == 1 ? s.built.bt->I1 : s.built.bt->I2;
    SectionCheck chk = check_section(*s.built.bt, *s.built.section);
    if (!chk.ok) throw NotASection(chk.failure);
    auto cp = characteristic_systems(sys);
    const SmoothMap& pi = side == 1 ? s.built.bt->pi1 : s.built.bt->pi2;
    std::vector<Form> p1;
    for (const auto& g : cp.C1.generators()) p1.push_back(pi.pullback(g));
    bool c1_is_first = same_span(p1, chk.char_pullbacks[side - 1][0]);
    const PfaffianSystem& target =
        (which == 1) == c1_is_first ? cp.C1 : cp.C2;
    auto flag = derived_flag(target);
    std::vector<std::pair<std::string, std::string>> rows;
    for (size_t i = 0; i < flag.size(); ++i)
        rows.emplace_back("rank " + std::to_string(i), std::to_string(flag[i].rank()));
    rep.tables.emplace_back("derived flag of " + system, rows);
    auto w = integrable_rank_one(target);
    if (w) {
        rep.witnesses.push_back(w->str());
        rep.pass("rank-one integrable subsystem");
    } else {
        rep.notes.push_back("no rank-one integrable subsystem");
        rep.pass("derived flag computed");
    }
    s.emit(rep);
}

void cmd_claw_verify(Session& s, const std::string& name, bool relations) {
    Report rep;
    rep.command = "claw-verify";
    rep.fixture = s.path;
    std::optional<JClawSpace> js;
    auto get_js = [&]() -> JClawSpace& {
        if (!js) js = s.jspace();
        return *js;
    };
    for (const auto& cc : s.built.claws) {
        if (!name.empty() && cc.name != name) continue;
        try {
            if (cc.side == 0) {
                bool ok = verify_closed_j(get_js(), *cc.jclaw);
                if (ok) rep.pass("claw " + cc.name, "closed on the slices");
                else rep.fail("claw " + cc.name, "d(Phi) != 0 mod zeta");
            } else {
                const MongeAmpereSystem& sys =
                    !cc.space.empty() && s.built.spaces.at(cc.space).system
                        ? *s.built.spaces.at(cc.space).system
                        : (cc.side == 1 ? s.built.bt->I1 : s.built.bt->I2);
                Form gamma = solve_gamma(sys, cc.Q);
                bool ok = verify_closed_ma(sys, cc.Q, gamma);
                if (ok) rep.pass("claw " + cc.name, "closed; gamma = " + gamma.str());
                else rep.fail("claw " + cc.name, "congruence solvable but d(Phi) != 0");
            }
        } catch (const NoSolution& e) {
            rep.fail("claw " + cc.name, e.what());
        }
    }
    if (relations) {
        JClawRelations rel = jclaw_symmetry_relations(get_js());
        std::vector<std::pair<std::string, std::string>> rows;
        for (int i = 0; i < 4; ++i)
            rows.emplace_back("Q" + std::to_string(i + 1), rel.q_coeff[i].str() + " * P" +
                                                               std::to_string(i + 1));
        std::string rstr;
        for (int i = 0; i < 4; ++i) {
            if (rel.r_coeff[i].is_zero_canonical()) continue;
            if (!rstr.empty()) rstr += " + ";
            rstr += "(" + rel.r_coeff[i].str() + ") * P" + std::to_string(i + 1);
        }
        rows.emplace_back("R", rstr.empty() ? "0" : rstr);
        rep.tables.emplace_back("forced relations", rows);
        rep.pass("relations computed");
    }
    if (rep.verdicts.empty()) rep.notes.push_back("no matching claw declarations");
    s.emit(rep);
}

void cmd_symmetry(Session& s, const std::string& name) {
    Report rep;
    rep.command = "symmetry-check";
    rep.fixture = s.path;
    if (!s.built.bt || !s.built.section) throw ConstructionError("document has no backlund block");
    for (const auto& [vname, v] : s.built.vectors) {
        if (!name.empty() && vname != name) continue;
        try {
            bool ok = is_symmetric_bt(*s.built.bt, *s.built.section, v);
            if (ok) rep.pass("vector " + vname, "symmetric transformation witness");
            else rep.fail("vector " + vname, "not a symmetric-transformation witness");
        } catch (const UnknownVerdict& e) {
            rep.unknown("vector " + vname, e.what());
        }
    }
    if (rep.verdicts.empty()) rep.notes.push_back("no matching vector declarations");
    s.emit(rep);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exterior differential systems toolkit"};
    app.require_subcommand(1);
    Session s;
    s.format = "text";

    std::string system = "C11", claw_name, vec_name;
    int side = 1;
    bool relations = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", s.path, "system definition (.eds)")->required();
        cmd->add_option("--format", s.format, "text|json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--seed", s.seed, "randomized identity checks");
        cmd->add_option("--max-degree", s.max_degree, "bound on wedge expansion degree");
        cmd->add_option("--assume", s.assumptions, "extra assumption (expr[:pred])");
    };

    CLI::App* c_check = app.add_subcommand("check", "algebra and section conditions");
    add_common(c_check);
    CLI::App* c_torsion = app.add_subcommand("torsion", "torsion table of the section");
    add_common(c_torsion);
    CLI::App* c_classify = app.add_subcommand("classify", "invariant classification");
    add_common(c_classify);
    CLI::App* c_char = app.add_subcommand("characteristics", "characteristic systems");
    add_common(c_char);
    c_char->add_option("--side", side, "side 1 or 2");
    CLI::App* c_derived = app.add_subcommand("derived", "derived flag of a characteristic system");
    add_common(c_derived);
    c_derived->add_option("--system", system, "C11|C12|C21|C22");
    CLI::App* c_claw = app.add_subcommand("claw-verify", "conservation-law verification");
    add_common(c_claw);
    c_claw->add_option("--name", claw_name, "restrict to one claw declaration");
    c_claw->add_flag("--relations", relations, "include the forced slice relations");
    CLI::App* c_sym = app.add_subcommand("symmetry-check", "symmetric-transformation witnesses");
    add_common(c_sym);
    c_sym->add_option("--vector", vec_name, "restrict to one vector field");

    CLI11_PARSE(app, argc, argv);

    try {
        s.load();
        if (c_check->parsed()) cmd_check(s);
        if (c_torsion->parsed()) cmd_torsion(s);
        if (c_classify->parsed()) cmd_classify(s);
        if (c_char->parsed()) cmd_characteristics(s, side);
        if (c_derived->parsed()) cmd_derived(s, system);
        if (c_claw->parsed()) cmd_claw_verify(s, claw_name, relations);
        if (c_sym->parsed()) cmd_symmetry(s, vec_name);
    } catch (const UnknownVerdict& e) {
        std::cerr << "undecided verdict: " << e.what() << "\n";
        return 3;
    } catch (const UnknownPivot& e) {
        std::cerr << "undecided pivot: " << e.what() << "\n";
        return 3;
    } catch (const SyntaxError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
