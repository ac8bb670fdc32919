#include "eds/pfaffian.hpp"

namespace eds {

PfaffianSystem::PfaffianSystem(AlgPtr alg, std::vector<Form> gens)
    : alg_(std::move(alg)), gens_(std::move(gens)) {
    for (const auto& g : gens_) {
        if (g.algebra() != alg_) throw AlgebraMismatch("generator on a different algebra");
        if (!g.is_zero() && g.degree() != 1) throw Error("Pfaffian generators must be 1-forms");
    }
    eliminations_for(gens_); // throws DependentGenerators / UnknownPivot
}

PfaffianSystem cartan_system(const Form& theta) {
    if (theta.is_zero()) throw Error("cartan_system of the zero form");
    const AlgPtr& alg = theta.algebra();
    Form r = reduce_mod(alg->d(theta), {theta});
    std::vector<Form> span{theta};
    for (int a = 0; a < alg->dim(); ++a) {
        VectorField v{alg, {{a, ScalarExpr(alg->ctx(), 1)}}};
        Form c = interior_product(v, r);
        if (!c.is_zero()) span.push_back(c);
    }
    auto reduced = reduced_spanning_set(span);
    return PfaffianSystem(alg, reduced);
}

PfaffianSystem derived_system(const PfaffianSystem& s) {
    const AlgPtr& alg = s.algebra();
    const Ctx& ctx = alg->ctx();
    auto elim = eliminations_for(s.generators());
    std::vector<Form> reduced_d;
    for (const auto& g : s.generators())
        reduced_d.push_back(apply_eliminations(alg->d(g), elim));

    // alpha = sum a_i g_i lies in the derived system iff sum a_i (dg_i mod S) = 0
    std::vector<std::vector<int>> monomials;
    Matrix rows = forms_coefficient_matrix(reduced_d, &monomials);
    // unknowns are the a_i: transpose so columns index the generators
    int n = s.rank();
    int m = static_cast<int>(monomials.size());
    Matrix sys(m, Vec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) sys[j][i] = rows[i][j];
    auto null = nullspace(sys, n, ctx);
    std::vector<Form> gens;
    for (const auto& a : null) {
        Form f(alg);
        for (int i = 0; i < n; ++i)
            if (!a[i].is_zero_canonical()) f += s.generators()[i] * a[i];
        gens.push_back(f);
    }
    return PfaffianSystem(alg, reduced_spanning_set(gens));
}

std::vector<PfaffianSystem> derived_flag(const PfaffianSystem& s) {
    std::vector<PfaffianSystem> flag{s};
    while (true) {
        PfaffianSystem next = derived_system(flag.back());
        if (next.rank() == flag.back().rank()) break;
        flag.push_back(std::move(next));
    }
    return flag;
}

bool is_frobenius(const PfaffianSystem& s) {
    return derived_system(s).rank() == s.rank();
}

std::optional<Form> integrable_rank_one(const PfaffianSystem& s) {
    auto flag = derived_flag(s);
    const PfaffianSystem& terminal = flag.back();
    if (terminal.rank() == 0) return std::nullopt;
    const AlgPtr& alg = s.algebra();
    for (const auto& cand : reduced_spanning_set(terminal.generators())) {
        if (wedge(alg->d(cand), cand).is_zero()) return cand;
    }
    return std::nullopt;
}

} // namespace eds
