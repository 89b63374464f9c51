#pragma once

// Shared fixture builders for the test suite.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bimod/bimodule.hpp"
#include "bimod/catalog.hpp"
#include "bimod/io/document.hpp"

namespace fx {

using namespace bimod;
using Q = Rationals;

template <class K>
Matrix<K> mat(const K& k, std::vector<std::vector<long long>> rows) {
  const auto c = rows.empty() ? 0 : rows[0].size();
  Matrix<K> m(k, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = k.from_int(rows[i][j]);
  return m;
}

template <class K>
Matrix<K> col(const K& k, std::vector<long long> v) {
  Matrix<K> m(k, v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m[i] = k.from_int(v[i]);
  return m;
}

/// B over k: B with left multiplication and the trivial right k-action.
template <class K>
BimodulePtr<K> over_k(const AlgebraPtr<K>& b) {
  return regular_over(unit_map(b));
}

template <class K>
BimodulePtr<K> fx1(const K& k = K{}) {
  return regular_bimodule(ground_algebra(k));
}

template <class K>
BimodulePtr<K> fx2(const K& k = K{}) {
  return over_k(catalog::product_algebra(k, 2));
}

template <class K>
BimodulePtr<K> fx3(const K& k = K{}) {
  return over_k(catalog::truncated_polynomial(k, 2));
}

template <class K>
BimodulePtr<K> fx4(const K& k = K{}) {
  return over_k(catalog::upper_triangular(k, 2));
}

/// Column space k^2 over the 2x2 matrices.
template <class K>
BimodulePtr<K> fx5(const K& k = K{}) {
  auto b = catalog::matrix_algebra(k, 2);
  std::vector<Matrix<K>> l;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Matrix<K> e(k, 2, 2);
      e(i, j) = k.one();
      l.push_back(e);
    }
  return std::make_shared<Bimodule<K>>(b, ground_algebra(k), 2, l, std::vector<Matrix<K>>{Matrix<K>::identity(k, 2)});
}

template <class K>
RingMap<K> fx6_map(const K& k = K{}) {
  return catalog::diagonal_embedding(catalog::product_algebra(k, 2), catalog::matrix_algebra(k, 2), 2);
}

template <class K>
BimodulePtr<K> fx6(const K& k = K{}) {
  return regular_over(fx6_map(k));
}

/// k over k[x]/(x^2) with x acting as 0.
template <class K>
BimodulePtr<K> k_over_fx3(const K& k = K{}) {
  auto b = catalog::truncated_polynomial(k, 2);
  std::vector<Matrix<K>> l = {Matrix<K>::identity(k, 1), Matrix<K>(k, 1, 1)};
  return std::make_shared<Bimodule<K>>(b, ground_algebra(k), 1, l, std::vector<Matrix<K>>{Matrix<K>::identity(k, 1)});
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline io::json load_json(const std::string& name) { return io::parse_json(read_file(fixture_path(name))); }

inline std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (int i = 1; i <= 6; ++i) out.push_back("fx" + std::to_string(i) + ".json");
  for (int i = 1; i <= 13; ++i) out.push_back("corpus/rand" + std::string(i < 10 ? "0" : "") + std::to_string(i) + ".json");
  return out;
}

}  // namespace fx
