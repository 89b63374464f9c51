#pragma once

// Finite-dimensional unital associative algebras given by structure
// constants, and ring homomorphisms between them.

#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bimod/error.hpp"
#include "bimod/exactlin.hpp"
#include "bimod/matrix.hpp"

namespace bimod {

template <class K>
class Algebra {
 public:
  using Element = typename K::Element;

  /// `table[i][j]` is the coordinate vector of e_i * e_j; `unit` the coordinates of 1.
  /// Nothing is validated here; see validate_algebra().
  Algebra(K field, std::size_t dim, const std::vector<std::vector<std::vector<Element>>>& table,
          const std::vector<Element>& unit, std::vector<std::string> basis_names = {})
      : field_(std::move(field)), dim_(dim), unit_(field_, dim, 1), names_(std::move(basis_names)) {
    if (dim == 0) throw ValidationError("algebra of dimension 0 (the zero ring) is not allowed");
    if (table.size() != dim) throw DimensionMismatch("multiplication table has " + std::to_string(table.size()) + " rows, expected " + std::to_string(dim));
    if (unit.size() != dim) throw DimensionMismatch("unit has length " + std::to_string(unit.size()) + ", expected " + std::to_string(dim));
    left_.assign(dim, Matrix<K>(field_, dim, dim));
    right_.assign(dim, Matrix<K>(field_, dim, dim));
    for (std::size_t i = 0; i < dim; ++i) {
      if (table[i].size() != dim)
        throw DimensionMismatch("multiplication table row " + std::to_string(i) + " has " + std::to_string(table[i].size()) + " entries, expected " + std::to_string(dim));
      for (std::size_t j = 0; j < dim; ++j) {
        if (table[i][j].size() != dim)
          throw DimensionMismatch("product e" + std::to_string(i) + "*e" + std::to_string(j) + " has length " + std::to_string(table[i][j].size()) + ", expected " + std::to_string(dim));
        for (std::size_t k = 0; k < dim; ++k) {
          left_[i](k, j) = table[i][j][k];
          right_[j](k, i) = table[i][j][k];
        }
      }
    }
    for (std::size_t i = 0; i < dim; ++i) unit_[i] = unit[i];
    if (names_.empty())
      for (std::size_t i = 0; i < dim; ++i) names_.push_back("e" + std::to_string(i));
  }

  const K& field() const { return field_; }
  std::size_t dim() const { return dim_; }
  const Matrix<K>& unit() const { return unit_; }
  const std::vector<std::string>& basis_names() const { return names_; }

  /// Matrix of v -> e_i v.
  const Matrix<K>& left_mult(std::size_t i) const { return left_[i]; }
  /// Matrix of v -> v e_j.
  const Matrix<K>& right_mult(std::size_t j) const { return right_[j]; }

  /// Coordinates of e_i e_j.
  Matrix<K> product(std::size_t i, std::size_t j) const { return left_[i].col(j); }

  Matrix<K> left_mult(const Matrix<K>& x) const { return combine(left_, x); }
  Matrix<K> right_mult(const Matrix<K>& x) const { return combine(right_, x); }

  Matrix<K> multiply(const Matrix<K>& x, const Matrix<K>& y) const { return left_mult(x) * y; }

  Matrix<K> basis_vector(std::size_t i) const { return Matrix<K>::unit_vector(field_, dim_, i); }

  /// Structure constants as a nested table (inverse of the constructor).
  std::vector<std::vector<std::vector<Element>>> table() const {
    std::vector<std::vector<std::vector<Element>>> t(dim_, std::vector<std::vector<Element>>(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k) t[i][j].push_back(left_[i](k, j));
    return t;
  }

  friend bool operator==(const Algebra& a, const Algebra& b) {
    return a.field_ == b.field_ && a.dim_ == b.dim_ && a.unit_ == b.unit_ && a.left_ == b.left_;
  }

 private:
  Matrix<K> combine(const std::vector<Matrix<K>>& ms, const Matrix<K>& x) const {
    if (x.rows() != dim_ || x.cols() != 1) throw DimensionMismatch("algebra element has shape " + x.shape());
    Matrix<K> r(field_, dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) r.add_scaled(x[i], ms[i]);
    return r;
  }

  K field_;
  std::size_t dim_;
  Matrix<K> unit_;
  std::vector<Matrix<K>> left_;
  std::vector<Matrix<K>> right_;
  std::vector<std::string> names_;
};

template <class K>
using AlgebraPtr = std::shared_ptr<const Algebra<K>>;

/// Same algebra: identical object or identical structure constants.
template <class K>
bool same_algebra(const AlgebraPtr<K>& a, const AlgebraPtr<K>& b) {
  return a == b || (a && b && *a == *b);
}

/// Outcome of an axiom check; `message` names the first violation.
struct Validation {
  bool ok = true;
  std::string message;

  static Validation pass() { return {}; }
  static Validation fail(std::string m) { return {false, std::move(m)}; }
  explicit operator bool() const { return ok; }
};

/// Associativity on all basis triples (lexicographic order), then the unit axioms.
template <class K>
Validation validate_algebra(const Algebra<K>& a) {
  const auto n = a.dim();
  const auto& names = a.basis_names();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto ij = a.product(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        auto lhs = a.right_mult(k) * ij;
        auto rhs = a.left_mult(i) * a.product(j, k);
        if (lhs != rhs) {
          return Validation::fail("associativity fails on triple (" + names[i] + ", " + names[j] + ", " + names[k] + ")");
        }
      }
    }
  auto lu = a.left_mult(a.unit());
  auto ru = a.right_mult(a.unit());
  auto id = Matrix<K>::identity(a.field(), n);
  for (std::size_t j = 0; j < n; ++j) {
    if (lu.col(j) != id.col(j)) return Validation::fail("unit is not a left identity on " + names[j]);
    if (ru.col(j) != id.col(j)) return Validation::fail("unit is not a right identity on " + names[j]);
  }
  return Validation::pass();
}

/// Unital ring homomorphism source -> target, as a dim(target) x dim(source) matrix.
template <class K>
struct RingMap {
  AlgebraPtr<K> source;
  AlgebraPtr<K> target;
  Matrix<K> matrix;

  Matrix<K> operator()(const Matrix<K>& x) const { return matrix * x; }
  Matrix<K> image(std::size_t i) const { return matrix.col(i); }
};

template <class K>
Validation validate_ring_map(const RingMap<K>& f) {
  if (!f.source || !f.target) return Validation::fail("ring map without source or target");
  if (!(f.source->field() == f.target->field())) return Validation::fail("ring map between different fields");
  if (f.matrix.rows() != f.target->dim() || f.matrix.cols() != f.source->dim())
    return Validation::fail("ring map matrix has shape " + f.matrix.shape());
  if (f(f.source->unit()) != f.target->unit()) return Validation::fail("ring map does not preserve the unit");
  const auto& names = f.source->basis_names();
  for (std::size_t i = 0; i < f.source->dim(); ++i)
    for (std::size_t j = 0; j < f.source->dim(); ++j) {
      auto lhs = f(f.source->product(i, j));
      auto rhs = f.target->multiply(f.image(i), f.image(j));
      if (lhs != rhs) return Validation::fail("ring map is not multiplicative on (" + names[i] + ", " + names[j] + ")");
    }
  return Validation::pass();
}

template <class K>
void require_valid(const RingMap<K>& f) {
  if (auto v = validate_ring_map(f); !v) throw ValidationError(v.message);
}

template <class K>
RingMap<K> identity_map(const AlgebraPtr<K>& a) {
  return {a, a, Matrix<K>::identity(a->field(), a->dim())};
}

template <class K>
RingMap<K> compose(const RingMap<K>& g, const RingMap<K>& f) {
  if (!same_algebra(f.target, g.source)) throw DimensionMismatch("compose: target of f is not the source of g");
  return {f.source, g.target, g.matrix * f.matrix};
}

/// The ground field as a one-dimensional algebra.
template <class K>
AlgebraPtr<K> ground_algebra(const K& field) {
  return std::make_shared<Algebra<K>>(field, 1, std::vector<std::vector<std::vector<typename K::Element>>>{{{field.one()}}},
                                      std::vector<typename K::Element>{field.one()}, std::vector<std::string>{"1"});
}

/// Structure map k -> B, 1 |-> 1_B.
template <class K>
RingMap<K> unit_map(const AlgebraPtr<K>& b) {
  auto k = ground_algebra(b->field());
  Matrix<K> m(b->field(), b->dim(), 1);
  m.set_col(0, b->unit());
  return {k, b, m};
}

}  // namespace bimod
