#pragma once
// Dense exact linear algebra over a field scalar: row reduction, rank, and
// linear solving for the small systems behind coefficient fits and
// independence certificates.

#include <optional>
#include <stdexcept>
#include <vector>

namespace fourbody {

template <class F>
using Rows = std::vector<std::vector<F>>;

/// Reduced row echelon form in place; returns the pivot columns in order.
template <class F>
std::vector<int> row_reduce(Rows<F>& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    F iv = m[r][c].inv();
    for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * iv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      F f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back((int)c);
    ++r;
  }
  return pivots;
}

template <class F>
int field_rank(Rows<F> m) {
  return (int)row_reduce(m).size();
}

/// Exact solution of A x = b with free unknowns set to zero; empty optional
/// if the system is inconsistent. `*unique` reports whether the solution is
/// the only one.
template <class F>
std::optional<std::vector<F>> solve_linear(Rows<F> a, const std::vector<F>& b,
                                           bool* unique = nullptr) {
  if (a.size() != b.size()) throw std::invalid_argument("solve_linear: shape");
  if (a.empty()) return std::vector<F>();
  const std::size_t cols = a[0].size();
  for (std::size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
  auto pivots = row_reduce(a);
  bool has_rhs_pivot = !pivots.empty() && pivots.back() == (int)cols;
  if (has_rhs_pivot) return std::nullopt;
  if (unique) *unique = pivots.size() == cols;
  std::vector<F> x(cols, F(0));
  for (std::size_t r = 0; r < pivots.size(); ++r)
    x[(std::size_t)pivots[r]] = a[r][cols];
  return x;
}

/// Basis of the right nullspace of A, one vector per free column.
template <class F>
Rows<F> nullspace(Rows<F> a) {
  Rows<F> out;
  if (a.empty()) return out;
  const std::size_t cols = a[0].size();
  auto pivots = row_reduce(a);
  std::vector<int> pivot_of_col((std::size_t)cols, -1);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    pivot_of_col[(std::size_t)pivots[r]] = (int)r;
  for (std::size_t c = 0; c < cols; ++c) {
    if (pivot_of_col[c] >= 0) continue;
    std::vector<F> v(cols, F(0));
    v[c] = F(1);
    for (std::size_t pc = 0; pc < cols; ++pc) {
      int r = pivot_of_col[pc];
      if (r >= 0) v[pc] = F(0) - a[(std::size_t)r][c];
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace fourbody
