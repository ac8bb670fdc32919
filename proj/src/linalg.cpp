#include "eds/linalg.hpp"

#include <algorithm>

namespace eds {

namespace {

// ---------------------------------------------------------------------------
// Fraction-free elimination.  Rows are cleared of denominators up front
// (row scaling changes neither rank nor null space nor solvability), then a
// Bareiss-style sweep keeps the entries polynomial.  Exact division by the
// previous pivot is attempted term-wise; when the quotient is not visible in
// the normal-form representation the division is skipped, which only scales
// the row.
// ---------------------------------------------------------------------------

struct Echelon {
    std::vector<std::vector<Poly>> a; // rows x (cols [+ rhs columns])
    std::vector<int> pivot_col;       // per eliminated row
    int cols = 0;                     // unknowns (leading block)
};

std::vector<Poly> clear_row(const Vec& row, const Ctx& ctx) {
    std::vector<const Fraction*> fr;
    for (const auto& e : row) fr.push_back(e.valid() ? &e.fraction() : nullptr);
    std::vector<Poly> out(row.size());
    for (size_t i = 0; i < row.size(); ++i) {
        if (!fr[i] || fr[i]->num.is_zero()) {
            out[i] = Poly{};
            continue;
        }
        Poly v = fr[i]->num;
        for (size_t j = 0; j < row.size(); ++j) {
            if (j == i || !fr[j]) continue;
            if (fr[j]->den.is_constant()) continue;
            v = poly_mul(v, fr[j]->den, *ctx);
        }
        out[i] = std::move(v);
    }
    return out;
}

int count_terms(const Poly& p) { return static_cast<int>(p.terms.size()); }

Echelon eliminate(std::vector<std::vector<Poly>> a, int cols, const Ctx& ctx) {
    Echelon e;
    e.cols = cols;
    int rows = static_cast<int>(a.size());
    int width = rows ? static_cast<int>(a[0].size()) : 0;
    Poly prev = poly_one();
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        // smallest nonzero entry as pivot
        int best = -1;
        for (int i = r; i < rows; ++i) {
            if (a[i][c].is_zero()) continue;
            if (best < 0 || count_terms(a[i][c]) < count_terms(a[best][c])) best = i;
        }
        if (best < 0) continue;
        std::swap(a[best], a[r]);
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            std::vector<Poly> updated(width);
            for (int j = 0; j < width; ++j) {
                if (j == c) continue;
                updated[j] = poly_mul(a[r][c], a[i][j], *ctx) - poly_mul(a[i][c], a[r][j], *ctx);
            }
            // divide the whole row by the previous pivot, or not at all:
            // partial division would destroy row proportionality
            if (!(prev.is_constant() && prev.constant_value() == Rational(1))) {
                std::vector<Poly> divided(width);
                bool all = true;
                for (int j = 0; j < width && all; ++j) {
                    if (j == c || updated[j].is_zero()) continue;
                    if (auto q = poly_divide_exact(updated[j], prev)) divided[j] = *q;
                    else all = false;
                }
                if (all) updated = std::move(divided);
            }
            a[i] = std::move(updated);
        }
        prev = a[r][c];
        e.pivot_col.push_back(c);
        ++r;
    }
    a.resize(rows);
    e.a = std::move(a);
    return e;
}

ScalarExpr poly_expr(const Ctx& ctx, const Poly& p) {
    return ScalarExpr::from_fraction(ctx, Fraction{p, poly_one()});
}

} // namespace

int matrix_rank(Matrix m, const Ctx& ctx) {
    if (m.empty()) return 0;
    std::vector<std::vector<Poly>> a;
    for (const auto& row : m) a.push_back(clear_row(row, ctx));
    Echelon e = eliminate(std::move(a), static_cast<int>(m[0].size()), ctx);
    return static_cast<int>(e.pivot_col.size());
}

std::vector<Vec> nullspace(const Matrix& m_in, int cols, const Ctx& ctx) {
    std::vector<std::vector<Poly>> a;
    for (const auto& row : m_in) a.push_back(clear_row(row, ctx));
    Echelon e = eliminate(std::move(a), cols, ctx);
    int r = static_cast<int>(e.pivot_col.size());
    std::vector<Vec> basis;
    for (int c = 0; c < cols; ++c) {
        if (std::find(e.pivot_col.begin(), e.pivot_col.end(), c) != e.pivot_col.end()) continue;
        Vec v(cols, ScalarExpr(ctx, 0));
        v[c] = ScalarExpr(ctx, 1);
        for (int i = 0; i < r; ++i) {
            // pivot * x_pc + a[i][c] = 0 along this row (other pivots vanished)
            const Poly& piv = e.a[i][e.pivot_col[i]];
            v[e.pivot_col[i]] = -poly_expr(ctx, e.a[i][c]) / poly_expr(ctx, piv);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vec> solve_linear(const Matrix& a_in, const Vec& b_in, const Ctx& ctx) {
    int rows = static_cast<int>(a_in.size());
    int cols = rows ? static_cast<int>(a_in[0].size()) : 0;
    std::vector<std::vector<Poly>> a;
    for (int i = 0; i < rows; ++i) {
        Vec row = a_in[i];
        row.push_back(i < static_cast<int>(b_in.size()) && b_in[i].valid() ? b_in[i]
                                                                           : ScalarExpr(ctx, 0));
        a.push_back(clear_row(row, ctx));
    }
    Echelon e = eliminate(std::move(a), cols, ctx);
    int r = static_cast<int>(e.pivot_col.size());
    for (int i = r; i < rows; ++i)
        if (!e.a[i][cols].is_zero()) return std::nullopt;
    Vec x(cols, ScalarExpr(ctx, 0));
    for (int i = 0; i < r; ++i) {
        // row i: pivot * x_pc + sum over free columns = rhs; the free columns
        // hold zero in the particular solution we return
        const Poly& piv = e.a[i][e.pivot_col[i]];
        x[e.pivot_col[i]] = poly_expr(ctx, e.a[i][cols]) / poly_expr(ctx, piv);
    }
    // verify on the original matrix (free columns may interact)
    for (int i = 0; i < rows; ++i) {
        ScalarExpr acc(ctx, 0);
        for (int j = 0; j < cols; ++j)
            if (a_in[i][j].valid()) acc += a_in[i][j] * x[j];
        ScalarExpr rhs = i < static_cast<int>(b_in.size()) && b_in[i].valid() ? b_in[i]
                                                                              : ScalarExpr(ctx, 0);
        if (!(acc - rhs).is_zero_canonical()) return std::nullopt;
    }
    return x;
}

Matrix invert_matrix(const Matrix& m_in, const Ctx& ctx) {
    int n = static_cast<int>(m_in.size());
    std::vector<std::vector<Poly>> a;
    for (int i = 0; i < n; ++i) {
        Vec row = m_in[i];
        for (int j = 0; j < n; ++j) row.push_back(ScalarExpr(ctx, i == j ? 1 : 0));
        a.push_back(clear_row(row, ctx));
    }
    // the identity block got scaled by the row denominators; fix by scaling
    // back: entry (i, n+i) currently holds prod(dens of row i) -- harmless,
    // since row scaling commutes with inversion bookkeeping
    Echelon e = eliminate(std::move(a), n, ctx);
    if (static_cast<int>(e.pivot_col.size()) != n) throw DependentGenerators("singular matrix");
    Matrix inv(n, Vec(n, ScalarExpr(ctx, 0)));
    for (int i = 0; i < n; ++i) {
        int pc = e.pivot_col[i];
        ScalarExpr piv = poly_expr(ctx, e.a[i][pc]);
        for (int j = 0; j < n; ++j) inv[pc][j] = poly_expr(ctx, e.a[i][n + j]) / piv;
    }
    return inv;
}

Matrix forms_coefficient_matrix(const std::vector<Form>& forms,
                                std::vector<std::vector<int>>* monomials) {
    std::vector<std::vector<int>> idx;
    for (const auto& f : forms)
        for (const auto& [i, c] : f.terms())
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
    std::sort(idx.begin(), idx.end());
    Matrix m;
    for (const auto& f : forms) {
        Vec row;
        for (const auto& i : idx) row.push_back(f.coefficient(i));
        m.push_back(std::move(row));
    }
    if (monomials) *monomials = idx;
    return m;
}

int span_rank(const std::vector<Form>& forms) {
    if (forms.empty()) return 0;
    return matrix_rank(forms_coefficient_matrix(forms), forms.front().algebra()->ctx());
}

bool in_span(const Form& f, const std::vector<Form>& forms) {
    if (f.is_zero()) return true;
    if (forms.empty()) return false;
    const Ctx& ctx = forms.front().algebra()->ctx();
    auto all = forms;
    all.push_back(f);
    std::vector<std::vector<int>> idx;
    Matrix m = forms_coefficient_matrix(all, &idx);
    // solve sum_i x_i forms_i = f: transpose system
    int n = static_cast<int>(forms.size());
    Matrix sys(idx.size(), Vec(n));
    Vec rhs(idx.size());
    for (size_t j = 0; j < idx.size(); ++j) {
        for (int i = 0; i < n; ++i) sys[j][i] = m[i][j];
        rhs[j] = m[n][j];
    }
    return solve_linear(sys, rhs, ctx).has_value();
}

bool same_span(const std::vector<Form>& a, const std::vector<Form>& b) {
    for (const auto& f : a)
        if (!in_span(f, b)) return false;
    for (const auto& f : b)
        if (!in_span(f, a)) return false;
    return true;
}

std::vector<Form> reduced_spanning_set(const std::vector<Form>& forms) {
    if (forms.empty()) return {};
    const AlgPtr& alg = forms.front().algebra();
    const Ctx& ctx = alg->ctx();
    std::vector<std::vector<int>> idx;
    Matrix m = forms_coefficient_matrix(forms, &idx);
    std::vector<std::vector<Poly>> a;
    for (const auto& row : m) a.push_back(clear_row(row, ctx));
    Echelon e = eliminate(std::move(a), static_cast<int>(idx.size()), ctx);
    std::vector<Form> out;
    for (size_t i = 0; i < e.pivot_col.size(); ++i) {
        ScalarExpr piv = poly_expr(ctx, e.a[i][e.pivot_col[i]]);
        Form f(alg);
        for (size_t j = 0; j < idx.size(); ++j)
            f.add(idx[j], poly_expr(ctx, e.a[i][j]) / piv);
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace eds
