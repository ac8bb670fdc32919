#ifndef EDS_LINALG_HPP
#define EDS_LINALG_HPP

#include <optional>
#include <vector>

#include "eds/form.hpp"
#include "eds/scalar.hpp"

namespace eds {

using Matrix = std::vector<std::vector<ScalarExpr>>;
using Vec = std::vector<ScalarExpr>;

// Exact Gaussian elimination over the scalar field.  Pivots prefer
// certified-nonzero entries; any canonically nonzero entry is usable.
Matrix invert_matrix(const Matrix& m, const Ctx& ctx);
int matrix_rank(Matrix m, const Ctx& ctx);
std::vector<Vec> nullspace(const Matrix& m, int cols, const Ctx& ctx);
std::optional<Vec> solve_linear(const Matrix& a, const Vec& b, const Ctx& ctx);

// span utilities for collections of forms (same algebra, same degree)
Matrix forms_coefficient_matrix(const std::vector<Form>& forms,
                                std::vector<std::vector<int>>* monomials = nullptr);
int span_rank(const std::vector<Form>& forms);
bool in_span(const Form& f, const std::vector<Form>& forms);
bool same_span(const std::vector<Form>& a, const std::vector<Form>& b);
// row-reduced spanning set; each generator pivoted on a distinct direction
std::vector<Form> reduced_spanning_set(const std::vector<Form>& forms);

} // namespace eds

#endif
