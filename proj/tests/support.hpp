#ifndef EDS_TESTS_SUPPORT_HPP
#define EDS_TESTS_SUPPORT_HPP

// numeric oracles shared by the property tests and the acceptance suite;
// these stay independent of the symbolic implementation paths they check

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "eds/form.hpp"

namespace eds::testing {

using Point = std::map<int, double>;

// sample coordinates until every registered assumption holds numerically
inline Point sample_point(const AlgPtr& alg, std::mt19937& rng, double lo = -2.0,
                          double hi = 2.0) {
    const Ctx& ctx = alg->ctx();
    std::uniform_real_distribution<double> dist(lo, hi);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Point pt;
        for (int s = 0; s < ctx->num_symbols(); ++s) pt[s] = dist(rng);
        bool ok = true;
        for (const auto& e : ctx->registry().entries()) {
            ScalarExpr expr = ScalarExpr::from_fraction(ctx, *e.expr);
            double v = expr.evaluate(pt);
            switch (e.pred) {
            case Pred::Nonzero: ok = std::abs(v) > 1e-2; break;
            case Pred::Positive: ok = v > 1e-2; break;
            case Pred::OpenInterval:
                ok = v > e.lo.convert_to<double>() + 1e-3 &&
                     v < e.hi.convert_to<double>() - 1e-3;
                break;
            }
            if (!ok) break;
        }
        if (ok) return pt;
    }
    throw Error("could not sample an admissible point");
}

using NumForm = std::map<std::vector<int>, double>;

inline NumForm eval_form(const Form& f, const Point& pt) {
    NumForm out;
    for (const auto& [idx, c] : f.terms()) out[idx] = c.evaluate(pt);
    return out;
}

inline double max_abs(const NumForm& f) {
    double m = 0;
    for (const auto& [i, v] : f) m = std::max(m, std::abs(v));
    return m;
}

inline bool close(const NumForm& a, const NumForm& b, double tol) {
    double scale = std::max({1.0, max_abs(a), max_abs(b)});
    NumForm diff = a;
    for (const auto& [i, v] : b) diff[i] -= v;
    return max_abs(diff) <= tol * scale;
}

// multilinear wedge of numeric forms (index merge with inversion signs)
inline NumForm wedge_oracle(const NumForm& a, const NumForm& b) {
    NumForm out;
    for (const auto& [ia, ca] : a)
        for (const auto& [ib, cb] : b) {
            std::vector<int> idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            int sign = 1;
            bool dup = false;
            for (size_t i = 1; i < idx.size() && !dup; ++i)
                for (size_t j = i; j > 0 && idx[j] <= idx[j - 1]; --j) {
                    if (idx[j] == idx[j - 1]) { dup = true; break; }
                    std::swap(idx[j], idx[j - 1]);
                    sign = -sign;
                }
            if (dup) continue;
            out[idx] += sign * ca * cb;
        }
    return out;
}

// finite-difference exterior derivative on a coordinate chart: the basis
// covector i is d of coordinate i
inline NumForm d_oracle(const Form& f, const AlgPtr& alg, const Point& pt, double h = 1e-5) {
    NumForm out;
    const Ctx& ctx = alg->ctx();
    for (const auto& [idx, c] : f.terms()) {
        for (int k = 0; k < alg->dim(); ++k) {
            // coordinate of basis direction k shares its symbol name
            int sym = ctx->symbol(alg->basis_names()[k].substr(1));
            Point up = pt, dn = pt;
            up[sym] += h;
            dn[sym] -= h;
            double pd = (c.evaluate(up) - c.evaluate(dn)) / (2 * h);
            if (pd == 0) continue;
            std::vector<int> full{k};
            full.insert(full.end(), idx.begin(), idx.end());
            int sign = 1;
            bool dup = false;
            for (size_t i = 1; i < full.size() && !dup; ++i)
                for (size_t j = i; j > 0 && full[j] <= full[j - 1]; --j) {
                    if (full[j] == full[j - 1]) { dup = true; break; }
                    std::swap(full[j], full[j - 1]);
                    sign = -sign;
                }
            if (dup) continue;
            out[full] += sign * pd;
        }
    }
    return out;
}

// numeric interior product against a numeric vector (components per basis dir)
inline NumForm interior_oracle(const std::map<int, double>& v, const NumForm& a) {
    NumForm out;
    for (const auto& [idx, c] : a) {
        for (size_t m = 0; m < idx.size(); ++m) {
            auto it = v.find(idx[m]);
            if (it == v.end() || it->second == 0) continue;
            std::vector<int> rest;
            for (size_t k = 0; k < idx.size(); ++k)
                if (k != m) rest.push_back(idx[k]);
            out[rest] += (m % 2 == 0 ? 1.0 : -1.0) * c * it->second;
        }
    }
    return out;
}

} // namespace eds::testing

#endif
