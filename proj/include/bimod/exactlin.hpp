#pragma once

// Exact dense linear algebra: reduced row echelon forms, kernels, affine
// solvability and quotient spaces. Pivoting always takes the leftmost
// nonzero column and the topmost row, so every basis produced here is a
// deterministic function of the input.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "bimod/error.hpp"
#include "bimod/matrix.hpp"

namespace bimod {

template <class K>
struct Rref {
  Matrix<K> reduced;
  std::vector<std::size_t> pivots;
};

/// A subspace of K^ambient_dim. The rows of `basis` are independent and
/// `basis` restricted to `coord_columns` is the identity, so the coordinates
/// of a vector lying in the subspace are its entries at `coord_columns`.
template <class K>
struct Subspace {
  std::size_t ambient_dim = 0;
  Matrix<K> basis;  // dim x ambient_dim
  std::vector<std::size_t> coord_columns;

  std::size_t dim() const { return basis.rows(); }

  /// Coordinates (dim x 1) of a vector assumed to lie in the subspace.
  Matrix<K> coordinates(const Matrix<K>& v) const {
    Matrix<K> c(basis.field(), coord_columns.size(), 1);
    for (std::size_t i = 0; i < coord_columns.size(); ++i) c[i] = v[coord_columns[i]];
    return c;
  }

  /// Basis vectors as the columns of an ambient_dim x dim matrix.
  Matrix<K> columns() const { return basis.transpose(); }
};

namespace detail {

/// In-place Gauss-Jordan elimination on the first `limit` columns.
template <class K>
std::vector<std::size_t> gauss_jordan(Matrix<K>& m, std::size_t limit) {
  using E = typename K::Element;
  const auto& k = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  std::vector<std::size_t> nz;
  for (std::size_t c = 0; c < limit && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    E inv = inverse(m(r, c));
    nz.clear();
    for (std::size_t j = c; j < m.cols(); ++j) {
      if (!is_zero(m(r, j))) {
        m(r, j) *= inv;
        nz.push_back(j);
      }
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      E f = m(i, c);
      for (std::size_t j : nz) sub_mul(m(i, j), f, m(r, j));
    }
    pivots.push_back(c);
    ++r;
  }
  (void)k;
  return pivots;
}

}  // namespace detail

/// Unique reduced row echelon form and its strictly increasing pivot columns.
template <class K>
Rref<K> rref(Matrix<K> m) {
  auto pivots = detail::gauss_jordan(m, m.cols());
  return {std::move(m), std::move(pivots)};
}

template <class K>
std::size_t rank(const Matrix<K>& m) {
  return rref(m).pivots.size();
}

/// Row space of `rows` in reduced echelon form (nonzero rows only);
/// coordinates are read off at the pivot columns.
template <class K>
Subspace<K> row_space(const Matrix<K>& rows) {
  auto [red, piv] = rref(rows);
  Subspace<K> s;
  s.ambient_dim = rows.cols();
  std::vector<std::size_t> keep(piv.size());
  for (std::size_t i = 0; i < piv.size(); ++i) keep[i] = i;
  s.basis = red.select_rows(keep);
  s.coord_columns = piv;
  return s;
}

/// Span of the columns of `cols`.
template <class K>
Subspace<K> column_space(const Matrix<K>& cols) {
  return row_space(cols.transpose());
}

/// The zero subspace and the whole space.
template <class K>
Subspace<K> zero_subspace(const K& field, std::size_t ambient) {
  return {ambient, Matrix<K>(field, 0, ambient), {}};
}

template <class K>
Subspace<K> full_subspace(const K& field, std::size_t ambient) {
  Subspace<K> s{ambient, Matrix<K>::identity(field, ambient), {}};
  for (std::size_t i = 0; i < ambient; ++i) s.coord_columns.push_back(i);
  return s;
}

namespace detail {

/// Kernel from an already reduced matrix: one basis vector per free column,
/// equal to 1 there and 0 on the other free columns.
template <class K>
Subspace<K> kernel_from_rref(const Matrix<K>& red, const std::vector<std::size_t>& pivots, std::size_t cols) {
  const auto& k = red.field();
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < cols; ++c)
    if (!is_pivot[c]) free.push_back(c);
  Subspace<K> s;
  s.ambient_dim = cols;
  s.basis = Matrix<K>(k, free.size(), cols);
  for (std::size_t f = 0; f < free.size(); ++f) {
    s.basis(f, free[f]) = k.one();
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (!is_zero(red(r, free[f]))) s.basis(f, pivots[r]) = -red(r, free[f]);
  }
  s.coord_columns = std::move(free);
  return s;
}

}  // namespace detail

/// Basis of {v : m v = 0}; dimension is cols - rank.
template <class K>
Subspace<K> kernel_basis(const Matrix<K>& m) {
  auto [red, piv] = rref(m);
  return detail::kernel_from_rref(red, piv, m.cols());
}

/// (column, value) pairs with strictly increasing columns.
template <class K>
using SparseRow = std::vector<std::pair<std::size_t, typename K::Element>>;

namespace detail {

/// Reduced echelon rows of a sparse system, ordered by leading column.
template <class K>
std::vector<SparseRow<K>> sparse_rref(const K& k, std::size_t cols, const std::vector<SparseRow<K>>& rows) {
  using E = typename K::Element;
  std::vector<SparseRow<K>> piv_rows;
  std::vector<long> pivot_of(cols, -1);
  std::vector<E> work(cols, k.zero());
  auto gather = [&](std::size_t from) {
    SparseRow<K> out;
    for (std::size_t c = from; c < cols; ++c)
      if (!is_zero(work[c])) {
        out.emplace_back(c, std::move(work[c]));
        work[c] = k.zero();
      }
    return out;
  };
  auto reduce = [&](std::size_t from) {
    for (std::size_t c = from; c < cols; ++c) {
      if (is_zero(work[c]) || pivot_of[c] < 0) continue;
      E f = work[c];
      for (const auto& [j, v] : piv_rows[static_cast<std::size_t>(pivot_of[c])]) sub_mul(work[j], f, v);
    }
  };
  for (const auto& row : rows) {
    if (row.empty()) continue;
    for (const auto& [c, v] : row) work[c] = v;
    const auto start = row.front().first;
    reduce(start);
    auto red = gather(start);
    if (red.empty()) continue;
    E inv = inverse(red.front().second);
    for (auto& [j, v] : red) v *= inv;
    pivot_of[red.front().first] = static_cast<long>(piv_rows.size());
    piv_rows.push_back(std::move(red));
  }
  // back substitution, largest leading column first
  std::vector<std::size_t> order(piv_rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return piv_rows[a].front().first > piv_rows[b].front().first; });
  for (auto i : order) {
    auto& row = piv_rows[i];
    const auto lead = row.front().first;
    bool touched = false;
    for (std::size_t q = 1; q < row.size() && !touched; ++q) touched = pivot_of[row[q].first] >= 0;
    if (!touched) continue;
    for (const auto& [c, v] : row) work[c] = v;
    reduce(lead + 1);
    row = gather(lead);
  }
  std::reverse(order.begin(), order.end());
  std::vector<SparseRow<K>> out;
  for (auto i : order) out.push_back(std::move(piv_rows[i]));
  return out;
}

}  // namespace detail

/// Same result as row_space on the dense matrix with these rows.
template <class K>
Subspace<K> sparse_row_space(const K& k, std::size_t cols, const std::vector<SparseRow<K>>& rows) {
  auto red = detail::sparse_rref(k, cols, rows);
  Subspace<K> s;
  s.ambient_dim = cols;
  s.basis = Matrix<K>(k, red.size(), cols);
  for (std::size_t i = 0; i < red.size(); ++i) {
    s.coord_columns.push_back(red[i].front().first);
    for (const auto& [c, v] : red[i]) s.basis(i, c) = v;
  }
  return s;
}

/// Same result as kernel_basis on the dense matrix with these rows, without
/// ever forming it.
template <class K>
Subspace<K> sparse_kernel(const K& k, std::size_t cols, const std::vector<SparseRow<K>>& rows) {
  auto piv_rows = detail::sparse_rref(k, cols, rows);
  std::vector<bool> is_pivot(cols, false);
  for (const auto& row : piv_rows) is_pivot[row.front().first] = true;
  std::vector<long> free_index(cols, -1);
  Subspace<K> s;
  s.ambient_dim = cols;
  for (std::size_t c = 0; c < cols; ++c)
    if (!is_pivot[c]) {
      free_index[c] = static_cast<long>(s.coord_columns.size());
      s.coord_columns.push_back(c);
    }
  s.basis = Matrix<K>(k, s.coord_columns.size(), cols);
  for (std::size_t f = 0; f < s.coord_columns.size(); ++f) s.basis(f, s.coord_columns[f]) = k.one();
  for (const auto& row : piv_rows) {
    const auto lead = row.front().first;
    for (std::size_t q = 1; q < row.size(); ++q)
      s.basis(static_cast<std::size_t>(free_index[row[q].first]), lead) = -row[q].second;
  }
  return s;
}

template <class K>
struct AffineSolution {
  Matrix<K> particular;     // n x 1
  Subspace<K> homogeneous;  // kernel of the constraint matrix
};

/// Solves constraints * x = rhs exactly; nullopt when infeasible.
template <class K>
std::optional<AffineSolution<K>> solve_affine(const Matrix<K>& constraints, const Matrix<K>& rhs) {
  if (rhs.cols() != 1 || rhs.rows() != constraints.rows())
    throw DimensionMismatch("solve_affine: rhs " + rhs.shape() + " for constraints " + constraints.shape());
  const auto& k = constraints.field();
  const std::size_t n = constraints.cols();
  Matrix<K> aug(k, constraints.rows(), n + 1);
  for (std::size_t i = 0; i < constraints.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = constraints(i, j);
    aug(i, n) = rhs[i];
  }
  auto piv = detail::gauss_jordan(aug, n);
  for (std::size_t i = piv.size(); i < aug.rows(); ++i)
    if (!is_zero(aug(i, n))) return std::nullopt;
  AffineSolution<K> sol;
  sol.particular = Matrix<K>(k, n, 1);
  for (std::size_t r = 0; r < piv.size(); ++r) sol.particular[piv[r]] = aug(r, n);
  sol.homogeneous = detail::kernel_from_rref(aug, piv, n);
  return sol;
}

/// For an infeasible system: a row vector y with y * constraints = 0 and
/// y * rhs = 1. nullopt when the system is feasible.
template <class K>
std::optional<Matrix<K>> infeasibility_certificate(const Matrix<K>& constraints, const Matrix<K>& rhs) {
  auto left_kernel = kernel_basis(constraints.transpose());
  for (std::size_t i = 0; i < left_kernel.dim(); ++i) {
    auto y = Matrix<K>(constraints.field(), 1, constraints.rows());
    for (std::size_t j = 0; j < constraints.rows(); ++j) y(0, j) = left_kernel.basis(i, j);
    auto d = (y * rhs)(0, 0);
    if (!is_zero(d)) {
      y *= inverse(d);
      return y;
    }
  }
  return std::nullopt;
}

/// Quotient of K^ambient by a subspace, with a projection and the section
/// that embeds the quotient along the non-pivot coordinates of the
/// relations' reduced echelon form.
template <class K>
struct Quotient {
  std::size_t dim = 0;
  Matrix<K> projection;   // dim x ambient
  Matrix<K> section;      // ambient x dim
  Subspace<K> relations;  // reduced echelon basis of the kernel of projection
};

template <class K>
Quotient<K> quotient_space(std::size_t ambient_dim, const Subspace<K>& relations) {
  if (relations.ambient_dim != ambient_dim) throw DimensionMismatch("quotient_space: relation ambient dimension");
  const auto& k = relations.basis.field();
  Quotient<K> q;
  q.relations = row_space(relations.basis);
  const auto& red = q.relations.basis;
  const auto& piv = q.relations.coord_columns;
  std::vector<long> pivot_row(ambient_dim, -1);
  for (std::size_t r = 0; r < piv.size(); ++r) pivot_row[piv[r]] = static_cast<long>(r);
  std::vector<std::size_t> rest;
  std::vector<std::size_t> rest_index(ambient_dim, 0);
  for (std::size_t c = 0; c < ambient_dim; ++c)
    if (pivot_row[c] < 0) {
      rest_index[c] = rest.size();
      rest.push_back(c);
    }
  q.dim = rest.size();
  q.section = Matrix<K>(k, ambient_dim, q.dim);
  for (std::size_t i = 0; i < q.dim; ++i) q.section(rest[i], i) = k.one();
  // v maps to v minus its reduction along the relation rows, read on the free coordinates.
  q.projection = Matrix<K>(k, q.dim, ambient_dim);
  for (std::size_t c = 0; c < ambient_dim; ++c) {
    if (pivot_row[c] < 0) {
      q.projection(rest_index[c], c) = k.one();
    } else {
      auto r = static_cast<std::size_t>(pivot_row[c]);
      for (std::size_t i = 0; i < q.dim; ++i)
        if (!is_zero(red(r, rest[i]))) q.projection(i, c) = -red(r, rest[i]);
    }
  }
  return q;
}

/// Overload taking relation vectors as the rows of a matrix.
template <class K>
Quotient<K> quotient_space(std::size_t ambient_dim, const Matrix<K>& relation_rows) {
  return quotient_space(ambient_dim, row_space(relation_rows));
}

/// Inverse of a square matrix; throws when singular.
template <class K>
Matrix<K> inverse(const Matrix<K>& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse of non-square matrix " + a.shape());
  const auto& k = a.field();
  const std::size_t n = a.rows();
  Matrix<K> aug(k, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = k.one();
  }
  auto piv = detail::gauss_jordan(aug, n);
  if (piv.size() != n) throw Error("inverse: singular matrix");
  Matrix<K> inv(k, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// True iff every column of `v` lies in the column span of `a`.
template <class K>
bool in_column_span(const Matrix<K>& a, const Matrix<K>& v) {
  if (v.cols() == 0) return true;
  return rank(hstack(a.field(), a.rows(), {a, v})) == rank(a);
}

/// Equality of two subspaces of the same ambient space.
template <class K>
bool same_subspace(const Subspace<K>& a, const Subspace<K>& b) {
  if (a.ambient_dim != b.ambient_dim) return false;
  return row_space(a.basis).basis == row_space(b.basis).basis;
}

}  // namespace bimod
