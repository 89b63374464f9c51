#pragma once

// Standard small algebras used as fixtures and in the command-line tool.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "bimod/algebra.hpp"

namespace bimod::catalog {

template <class K>
using Table = std::vector<std::vector<std::vector<typename K::Element>>>;

template <class K>
Table<K> empty_table(const K& k, std::size_t n) {
  return Table<K>(n, std::vector<std::vector<typename K::Element>>(n, std::vector<typename K::Element>(n, k.zero())));
}

/// k^n with orthogonal idempotents e_0..e_{n-1}.
template <class K>
AlgebraPtr<K> product_algebra(const K& k, std::size_t n) {
  auto t = empty_table(k, n);
  std::vector<typename K::Element> unit(n, k.one());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    t[i][i][i] = k.one();
    names.push_back("e" + std::to_string(i + 1));
  }
  return std::make_shared<Algebra<K>>(k, n, t, unit, names);
}

/// k[x]/(x^n) with basis 1, x, ..., x^{n-1}.
template <class K>
AlgebraPtr<K> truncated_polynomial(const K& k, std::size_t n) {
  auto t = empty_table(k, n);
  std::vector<typename K::Element> unit(n, k.zero());
  unit[0] = k.one();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i)));
    for (std::size_t j = 0; i + j < n; ++j) t[i][j][i + j] = k.one();
  }
  return std::make_shared<Algebra<K>>(k, n, t, unit, names);
}

/// n x n matrices; basis E_ij at index i*n + j.
template <class K>
AlgebraPtr<K> matrix_algebra(const K& k, std::size_t n) {
  const std::size_t d = n * n;
  auto t = empty_table(k, d);
  std::vector<typename K::Element> unit(d, k.zero());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    unit[i * n + i] = k.one();
    for (std::size_t j = 0; j < n; ++j) {
      names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
      for (std::size_t l = 0; l < n; ++l) t[i * n + j][j * n + l][i * n + l] = k.one();
    }
  }
  return std::make_shared<Algebra<K>>(k, d, t, unit, names);
}

/// Upper-triangular n x n matrices; basis E_ij (i <= j) in row-major order.
template <class K>
AlgebraPtr<K> upper_triangular(const K& k, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) idx.emplace_back(i, j);
  const std::size_t d = idx.size();
  auto pos = [&](std::size_t i, std::size_t j) {
    for (std::size_t p = 0; p < d; ++p)
      if (idx[p].first == i && idx[p].second == j) return p;
    return d;
  };
  auto t = empty_table(k, d);
  std::vector<typename K::Element> unit(d, k.zero());
  std::vector<std::string> names;
  for (std::size_t p = 0; p < d; ++p) {
    auto [i, j] = idx[p];
    names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
    if (i == j) unit[p] = k.one();
    for (std::size_t q = 0; q < d; ++q) {
      auto [l, m] = idx[q];
      if (j == l) t[p][q][pos(i, m)] = k.one();
    }
  }
  return std::make_shared<Algebra<K>>(k, d, t, unit, names);
}

/// Diagonal embedding k^n -> M_n(k).
template <class K>
RingMap<K> diagonal_embedding(const AlgebraPtr<K>& diag, const AlgebraPtr<K>& full, std::size_t n) {
  Matrix<K> m(full->field(), full->dim(), diag->dim());
  for (std::size_t i = 0; i < n; ++i) m(i * n + i, i) = full->field().one();
  return {diag, full, m};
}

}  // namespace bimod::catalog
