#pragma once

// Bimodules over finite-dimensional algebras and the module calculus built
// on them: Hom spaces, duals, tensor products over a middle algebra,
// evaluation maps, endomorphism rings, traces and the projectivity and
// generator predicates.
//
// Conventions. A bimodule _B M_A carries a left action b -> lambda(b) with
// lambda(bb') = lambda(b) lambda(b') and a right action a -> rho(a), where
// rho(a) is the matrix of m |-> m.a, so rho(aa') = rho(a') rho(a).
// Left B-linear maps are written on the left of their argument in the
// mathematics ((m)f) but are stored as ordinary matrices F with
// (m)f = F m. Composition in an endomorphism ring is "apply f, then g",
// i.e. f*g has matrix G F, which makes M a B-S bimodule.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bimod/algebra.hpp"
#include "bimod/error.hpp"
#include "bimod/exactlin.hpp"
#include "bimod/matrix.hpp"

namespace bimod {

// ------------------------------------------------------------ resource cap

/// Upper bound on the dimension of any plain tensor space the library
/// materializes. Exceeding it raises ResourceError.
inline std::atomic<std::size_t>& dimension_cap() {
  static std::atomic<std::size_t> cap{20000};
  return cap;
}

/// Restores the previous cap on scope exit.
class ScopedDimensionCap {
 public:
  explicit ScopedDimensionCap(std::size_t cap) : saved_(dimension_cap().exchange(cap)) {}
  ~ScopedDimensionCap() { dimension_cap().store(saved_); }
  ScopedDimensionCap(const ScopedDimensionCap&) = delete;
  ScopedDimensionCap& operator=(const ScopedDimensionCap&) = delete;

 private:
  std::size_t saved_;
};

inline void check_dimension(std::size_t dim, const std::string& what) {
  if (dim > dimension_cap().load())
    throw ResourceError(what + " has dimension " + std::to_string(dim) + ", above the cap of " +
                        std::to_string(dimension_cap().load()));
}

// ---------------------------------------------------------------- bimodule

template <class K>
class Bimodule {
 public:
  Bimodule(AlgebraPtr<K> left, AlgebraPtr<K> right, std::size_t dim, std::vector<Matrix<K>> left_action,
           std::vector<Matrix<K>> right_action)
      : left_(std::move(left)), right_(std::move(right)), dim_(dim), lambda_(std::move(left_action)),
        rho_(std::move(right_action)) {
    if (!(left_->field() == right_->field())) throw DimensionMismatch("bimodule over algebras with different fields");
    if (lambda_.size() != left_->dim())
      throw DimensionMismatch("left action has " + std::to_string(lambda_.size()) + " matrices, expected " + std::to_string(left_->dim()));
    if (rho_.size() != right_->dim())
      throw DimensionMismatch("right action has " + std::to_string(rho_.size()) + " matrices, expected " + std::to_string(right_->dim()));
    for (const auto& m : lambda_)
      if (m.rows() != dim_ || m.cols() != dim_) throw DimensionMismatch("left action matrix has shape " + m.shape());
    for (const auto& m : rho_)
      if (m.rows() != dim_ || m.cols() != dim_) throw DimensionMismatch("right action matrix has shape " + m.shape());
  }

  const K& field() const { return left_->field(); }
  const AlgebraPtr<K>& left() const { return left_; }
  const AlgebraPtr<K>& right() const { return right_; }
  std::size_t dim() const { return dim_; }

  const Matrix<K>& left_action(std::size_t i) const { return lambda_[i]; }
  const Matrix<K>& right_action(std::size_t j) const { return rho_[j]; }
  const std::vector<Matrix<K>>& left_actions() const { return lambda_; }
  const std::vector<Matrix<K>>& right_actions() const { return rho_; }

  /// lambda(b) for an arbitrary element b of the left algebra.
  Matrix<K> act_left(const Matrix<K>& b) const { return combine(lambda_, b); }
  /// rho(a) for an arbitrary element a of the right algebra.
  Matrix<K> act_right(const Matrix<K>& a) const { return combine(rho_, a); }

 private:
  Matrix<K> combine(const std::vector<Matrix<K>>& ms, const Matrix<K>& x) const {
    Matrix<K> r(field(), dim_, dim_);
    for (std::size_t i = 0; i < ms.size(); ++i) r.add_scaled(x[i], ms[i]);
    return r;
  }

  AlgebraPtr<K> left_;
  AlgebraPtr<K> right_;
  std::size_t dim_;
  std::vector<Matrix<K>> lambda_;
  std::vector<Matrix<K>> rho_;
};

template <class K>
using BimodulePtr = std::shared_ptr<const Bimodule<K>>;

template <class K>
Validation validate_bimodule(const Bimodule<K>& m) {
  const auto& b = *m.left();
  const auto& a = *m.right();
  auto id = Matrix<K>::identity(m.field(), m.dim());
  if (m.act_left(b.unit()) != id) return Validation::fail("left action of the unit is not the identity");
  if (m.act_right(a.unit()) != id) return Validation::fail("right action of the unit is not the identity");
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      if (m.left_action(i) * m.left_action(j) != m.act_left(b.product(i, j)))
        return Validation::fail("left action is not multiplicative on (" + b.basis_names()[i] + ", " + b.basis_names()[j] + ")");
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (m.right_action(j) * m.right_action(i) != m.act_right(a.product(i, j)))
        return Validation::fail("right action is not multiplicative on (" + a.basis_names()[i] + ", " + a.basis_names()[j] + ")");
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (m.left_action(i) * m.right_action(j) != m.right_action(j) * m.left_action(i))
        return Validation::fail("actions of " + b.basis_names()[i] + " and " + a.basis_names()[j] + " do not commute");
  return Validation::pass();
}

template <class K>
void require_valid(const Bimodule<K>& m) {
  if (auto v = validate_bimodule(m); !v) throw ValidationError(v.message);
}

/// B as a B-B bimodule.
template <class K>
BimodulePtr<K> regular_bimodule(const AlgebraPtr<K>& b) {
  std::vector<Matrix<K>> l, r;
  for (std::size_t i = 0; i < b->dim(); ++i) {
    l.push_back(b->left_mult(i));
    r.push_back(b->right_mult(i));
  }
  return std::make_shared<Bimodule<K>>(b, b, b->dim(), std::move(l), std::move(r));
}

/// Restriction of scalars along ring maps into the left and/or right algebra.
template <class K>
BimodulePtr<K> restrict_scalars(const BimodulePtr<K>& m, const RingMap<K>* left, const RingMap<K>* right) {
  if (left && !same_algebra(left->target, m->left())) throw DimensionMismatch("restrict_scalars: left map target mismatch");
  if (right && !same_algebra(right->target, m->right())) throw DimensionMismatch("restrict_scalars: right map target mismatch");
  std::vector<Matrix<K>> l, r;
  if (left) {
    for (std::size_t i = 0; i < left->source->dim(); ++i) l.push_back(m->act_left(left->image(i)));
  } else {
    l = m->left_actions();
  }
  if (right) {
    for (std::size_t i = 0; i < right->source->dim(); ++i) r.push_back(m->act_right(right->image(i)));
  } else {
    r = m->right_actions();
  }
  return std::make_shared<Bimodule<K>>(left ? left->source : m->left(), right ? right->source : m->right(), m->dim(),
                                       std::move(l), std::move(r));
}

template <class K>
BimodulePtr<K> restrict_left(const BimodulePtr<K>& m, const RingMap<K>& f) {
  return restrict_scalars<K>(m, &f, nullptr);
}

template <class K>
BimodulePtr<K> restrict_right(const BimodulePtr<K>& m, const RingMap<K>& f) {
  return restrict_scalars<K>(m, nullptr, &f);
}

/// B as a B-A bimodule for a ring map A -> B.
template <class K>
BimodulePtr<K> regular_over(const RingMap<K>& f) {
  return restrict_scalars<K>(regular_bimodule(f.target), nullptr, &f);
}

/// B as an A-B bimodule for a ring map A -> B.
template <class K>
BimodulePtr<K> regular_under(const RingMap<K>& f) {
  return restrict_scalars<K>(regular_bimodule(f.target), &f, nullptr);
}

/// Forget the right action: a left B-module viewed as a B-k bimodule.
template <class K>
BimodulePtr<K> as_left_module(const BimodulePtr<K>& m) {
  auto k = ground_algebra(m->field());
  return std::make_shared<Bimodule<K>>(m->left(), k, m->dim(), m->left_actions(),
                                       std::vector<Matrix<K>>{Matrix<K>::identity(m->field(), m->dim())});
}

template <class K>
BimodulePtr<K> zero_bimodule(const AlgebraPtr<K>& b, const AlgebraPtr<K>& a) {
  std::vector<Matrix<K>> l(b->dim(), Matrix<K>(b->field(), 0, 0));
  std::vector<Matrix<K>> r(a->dim(), Matrix<K>(b->field(), 0, 0));
  return std::make_shared<Bimodule<K>>(b, a, 0, std::move(l), std::move(r));
}

template <class K>
BimodulePtr<K> direct_sum(const BimodulePtr<K>& x, const BimodulePtr<K>& y) {
  if (!same_algebra(x->left(), y->left()) || !same_algebra(x->right(), y->right()))
    throw DimensionMismatch("direct_sum: algebra mismatch");
  const auto n = x->dim() + y->dim();
  auto block = [&](const Matrix<K>& a, const Matrix<K>& b) {
    Matrix<K> r(x->field(), n, n);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
    return r;
  };
  std::vector<Matrix<K>> l, r;
  for (std::size_t i = 0; i < x->left()->dim(); ++i) l.push_back(block(x->left_action(i), y->left_action(i)));
  for (std::size_t i = 0; i < x->right()->dim(); ++i) r.push_back(block(x->right_action(i), y->right_action(i)));
  return std::make_shared<Bimodule<K>>(x->left(), x->right(), n, std::move(l), std::move(r));
}

/// The same bimodule in the basis given by the columns of an invertible matrix.
template <class K>
BimodulePtr<K> change_basis(const BimodulePtr<K>& m, const Matrix<K>& p) {
  auto pinv = inverse(p);
  std::vector<Matrix<K>> l, r;
  for (const auto& a : m->left_actions()) l.push_back(pinv * a * p);
  for (const auto& a : m->right_actions()) r.push_back(pinv * a * p);
  return std::make_shared<Bimodule<K>>(m->left(), m->right(), m->dim(), std::move(l), std::move(r));
}

// -------------------------------------------------------------- maps

template <class K>
struct BimoduleMap {
  BimodulePtr<K> source;
  BimodulePtr<K> target;
  Matrix<K> matrix;  // target->dim() x source->dim()
};

/// Shapes agree and both actions are intertwined on every basis element.
template <class K>
Validation validate_map(const BimoduleMap<K>& f) {
  const auto& s = *f.source;
  const auto& t = *f.target;
  if (!same_algebra(s.left(), t.left()) || !same_algebra(s.right(), t.right()))
    return Validation::fail("map between bimodules over different algebras");
  if (f.matrix.rows() != t.dim() || f.matrix.cols() != s.dim()) return Validation::fail("map matrix has shape " + f.matrix.shape());
  for (std::size_t i = 0; i < s.left()->dim(); ++i)
    if (f.matrix * s.left_action(i) != t.left_action(i) * f.matrix)
      return Validation::fail("map does not commute with the left action of " + s.left()->basis_names()[i]);
  for (std::size_t i = 0; i < s.right()->dim(); ++i)
    if (f.matrix * s.right_action(i) != t.right_action(i) * f.matrix)
      return Validation::fail("map does not commute with the right action of " + s.right()->basis_names()[i]);
  return Validation::pass();
}

template <class K>
bool is_injective(const BimoduleMap<K>& f) {
  return rank(f.matrix) == f.source->dim();
}

template <class K>
bool is_surjective(const BimoduleMap<K>& f) {
  return rank(f.matrix) == f.target->dim();
}

template <class K>
bool is_isomorphism(const BimoduleMap<K>& f) {
  return f.source->dim() == f.target->dim() && is_injective(f);
}

/// A subbimodule given by an invariant subspace, with its inclusion.
template <class K>
struct Submodule {
  BimodulePtr<K> module;
  Matrix<K> inclusion;  // ambient x dim
  Subspace<K> space;
};

/// Restricts the actions of `y` to an invariant subspace; throws if the
/// subspace is not invariant.
template <class K>
Submodule<K> submodule(const BimodulePtr<K>& y, const Subspace<K>& space) {
  if (space.ambient_dim != y->dim()) throw DimensionMismatch("submodule: subspace of the wrong ambient space");
  auto basis = space.columns();
  auto restrict_to = [&](const Matrix<K>& act) {
    auto img = act * basis;
    Matrix<K> r(y->field(), space.dim(), space.dim());
    for (std::size_t j = 0; j < space.dim(); ++j) {
      auto c = space.coordinates(img.col(j));
      if (basis * c != img.col(j)) throw ValidationError("subspace is not invariant under the actions");
      r.set_col(j, c);
    }
    return r;
  };
  std::vector<Matrix<K>> l, r;
  for (const auto& a : y->left_actions()) l.push_back(restrict_to(a));
  for (const auto& a : y->right_actions()) r.push_back(restrict_to(a));
  return {std::make_shared<Bimodule<K>>(y->left(), y->right(), space.dim(), std::move(l), std::move(r)), basis, space};
}

template <class K>
Submodule<K> kernel_submodule(const BimoduleMap<K>& f) {
  return submodule(f.source, kernel_basis(f.matrix));
}

// -------------------------------------------------------------- intertwiners

namespace detail {

/// All X (target_dim x source_dim) with X * a = b * X for every (a, b) in
/// `pairs`, as a subspace of vec(X) (row-major). Constraints are imposed one
/// pair at a time on the current solution basis.
template <class K>
Subspace<K> solve_intertwiners(const K& k, std::size_t source_dim, std::size_t target_dim,
                               const std::vector<std::pair<const Matrix<K>*, const Matrix<K>*>>& pairs) {
  const std::size_t n = source_dim * target_dim;
  auto id_s = Matrix<K>::identity(k, source_dim);
  auto id_t = Matrix<K>::identity(k, target_dim);
  std::vector<SparseRow<K>> rows;
  std::map<std::size_t, typename K::Element> acc;
  for (const auto& [a, b] : pairs) {
    if (*a == id_s && *b == id_t) continue;
    // Row (i, j) of X a - b X; unknown (p, q) is X_pq.
    for (std::size_t i = 0; i < target_dim; ++i)
      for (std::size_t j = 0; j < source_dim; ++j) {
        acc.clear();
        for (std::size_t q = 0; q < source_dim; ++q)
          if (!is_zero((*a)(q, j))) acc.try_emplace(i * source_dim + q, k.zero()).first->second += (*a)(q, j);
        for (std::size_t p = 0; p < target_dim; ++p)
          if (!is_zero((*b)(i, p))) acc.try_emplace(p * source_dim + j, k.zero()).first->second -= (*b)(i, p);
        SparseRow<K> row;
        for (auto& [c, v] : acc)
          if (!is_zero(v)) row.emplace_back(c, std::move(v));
        if (!row.empty()) rows.push_back(std::move(row));
      }
  }
  if (rows.empty()) return full_subspace(k, n);
  return sparse_kernel(k, n, rows);
}

}  // namespace detail

// -------------------------------------------------------------- Hom spaces

/// Left B-linear maps M -> N as an A-T bimodule, for _B M_A and _B N_T.
/// Each abstract basis vector is realized by a concrete matrix.
template <class K>
struct HomSpace {
  BimodulePtr<K> module;  // over (A, T)
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  std::vector<Matrix<K>> basis;  // target_dim x source_dim each
  Subspace<K> space;             // span of vec(basis) inside K^{target_dim * source_dim}

  std::size_t dim() const { return basis.size(); }

  /// Coordinates of a left B-linear map (assumed to lie in the space).
  Matrix<K> coordinates(const Matrix<K>& f) const { return space.coordinates(f.vec()); }

  Matrix<K> realize(const Matrix<K>& coords) const {
    Matrix<K> f(module->field(), target_dim, source_dim);
    for (std::size_t i = 0; i < basis.size(); ++i) f.add_scaled(coords[i], basis[i]);
    return f;
  }
};

/// _B Hom(M, N) with (m)(a f t) := ((m a) f) t.
template <class K>
HomSpace<K> hom_left(const BimodulePtr<K>& m, const BimodulePtr<K>& n, const std::string& label = "Hom space") {
  if (!same_algebra(m->left(), n->left())) throw DimensionMismatch("hom_left: modules over different left algebras");
  const auto& k = m->field();
  check_dimension(m->dim() * n->dim(), label);
  std::vector<std::pair<const Matrix<K>*, const Matrix<K>*>> pairs;
  for (std::size_t i = 0; i < m->left()->dim(); ++i) pairs.emplace_back(&m->left_action(i), &n->left_action(i));
  HomSpace<K> h;
  h.source_dim = m->dim();
  h.target_dim = n->dim();
  h.space = detail::solve_intertwiners(k, m->dim(), n->dim(), pairs);
  for (std::size_t r = 0; r < h.space.dim(); ++r) {
    Matrix<K> f(k, n->dim(), m->dim());
    for (std::size_t e = 0; e < f.rows() * f.cols(); ++e) f[e] = h.space.basis(r, e);
    h.basis.push_back(std::move(f));
  }
  const auto d = h.dim();
  std::vector<Matrix<K>> l, r;
  for (std::size_t a = 0; a < m->right()->dim(); ++a) {
    Matrix<K> act(k, d, d);
    for (std::size_t j = 0; j < d; ++j) act.set_col(j, h.coordinates(h.basis[j] * m->right_action(a)));
    l.push_back(std::move(act));
  }
  for (std::size_t t = 0; t < n->right()->dim(); ++t) {
    Matrix<K> act(k, d, d);
    for (std::size_t j = 0; j < d; ++j) act.set_col(j, h.coordinates(n->right_action(t) * h.basis[j]));
    r.push_back(std::move(act));
  }
  h.module = std::make_shared<Bimodule<K>>(m->right(), n->right(), d, std::move(l), std::move(r));
  return h;
}

/// Bimodule maps X -> Y (both actions intertwined), as a subspace of vec'd matrices.
template <class K>
HomSpace<K> hom_bimodule(const BimodulePtr<K>& x, const BimodulePtr<K>& y, const std::string& label = "bimodule Hom space") {
  if (!same_algebra(x->left(), y->left()) || !same_algebra(x->right(), y->right()))
    throw DimensionMismatch("hom_bimodule: algebra mismatch");
  const auto& k = x->field();
  check_dimension(x->dim() * y->dim(), label);
  std::vector<std::pair<const Matrix<K>*, const Matrix<K>*>> pairs;
  for (std::size_t i = 0; i < x->left()->dim(); ++i) pairs.emplace_back(&x->left_action(i), &y->left_action(i));
  for (std::size_t i = 0; i < x->right()->dim(); ++i) pairs.emplace_back(&x->right_action(i), &y->right_action(i));
  HomSpace<K> h;
  h.source_dim = x->dim();
  h.target_dim = y->dim();
  h.space = detail::solve_intertwiners(k, x->dim(), y->dim(), pairs);
  for (std::size_t r = 0; r < h.space.dim(); ++r) {
    Matrix<K> f(k, y->dim(), x->dim());
    for (std::size_t e = 0; e < f.rows() * f.cols(); ++e) f[e] = h.space.basis(r, e);
    h.basis.push_back(std::move(f));
  }
  auto g = ground_algebra(k);
  auto id = Matrix<K>::identity(k, h.dim());
  h.module = std::make_shared<Bimodule<K>>(g, g, h.dim(), std::vector<Matrix<K>>{id}, std::vector<Matrix<K>>{id});
  return h;
}

/// Right-linear maps M -> N for M_T, N_T: G rho_M(t) = rho_N(t) G.
template <class K>
Subspace<K> hom_right_space(const BimodulePtr<K>& m, const BimodulePtr<K>& n) {
  if (!same_algebra(m->right(), n->right())) throw DimensionMismatch("hom_right: modules over different right algebras");
  std::vector<std::pair<const Matrix<K>*, const Matrix<K>*>> pairs;
  for (std::size_t i = 0; i < m->right()->dim(); ++i) pairs.emplace_back(&m->right_action(i), &n->right_action(i));
  return detail::solve_intertwiners(m->field(), m->dim(), n->dim(), pairs);
}

/// *M = _B Hom(M, B) as an A-B bimodule.
template <class K>
HomSpace<K> dual_module(const BimodulePtr<K>& m) {
  return hom_left(m, regular_bimodule(m->left()));
}

/// Centralizer {x in X : b x = x b for all b} of a B-B bimodule.
template <class K>
Subspace<K> invariants(const BimodulePtr<K>& x) {
  if (!same_algebra(x->left(), x->right())) throw DimensionMismatch("invariants: left and right algebras differ");
  const auto& k = x->field();
  std::vector<Matrix<K>> blocks;
  for (std::size_t i = 0; i < x->left()->dim(); ++i) blocks.push_back(x->left_action(i) - x->right_action(i));
  return kernel_basis(vstack(k, x->dim(), blocks));
}

// -------------------------------------------------------------- tensor products

/// M (x)_A N as a quotient of the plain tensor space; plain index i*dim N + j.
template <class K>
struct TensorProduct {
  BimodulePtr<K> module;
  Quotient<K> quotient;
  std::size_t left_dim = 0;
  std::size_t right_dim = 0;

  std::size_t plain_dim() const { return left_dim * right_dim; }
  const Matrix<K>& projection() const { return quotient.projection; }
  const Matrix<K>& section() const { return quotient.section; }
};

template <class K>
TensorProduct<K> tensor_over(const BimodulePtr<K>& m, const BimodulePtr<K>& n, const std::string& label = "tensor product") {
  if (!same_algebra(m->right(), n->left())) throw DimensionMismatch("tensor_over: middle algebras differ");
  const auto& k = m->field();
  const auto dm = m->dim();
  const auto dn = n->dim();
  const auto plain = dm * dn;
  check_dimension(plain, label);
  auto id_m = Matrix<K>::identity(k, dm);
  auto id_n = Matrix<K>::identity(k, dn);
  std::vector<SparseRow<K>> rows;
  std::map<std::size_t, typename K::Element> acc;
  const auto& mid = *m->right();
  for (std::size_t a = 0; a < mid.dim(); ++a) {
    const auto& ra = m->right_action(a);
    const auto& la = n->left_action(a);
    if (ra == id_m && la == id_n) continue;
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = 0; j < dn; ++j) {
        acc.clear();
        for (std::size_t p = 0; p < dm; ++p)
          if (!is_zero(ra(p, i))) acc.try_emplace(p * dn + j, k.zero()).first->second += ra(p, i);
        for (std::size_t q = 0; q < dn; ++q)
          if (!is_zero(la(q, j))) acc.try_emplace(i * dn + q, k.zero()).first->second -= la(q, j);
        SparseRow<K> row;
        for (auto& [c, v] : acc)
          if (!is_zero(v)) row.emplace_back(c, std::move(v));
        if (!row.empty()) rows.push_back(std::move(row));
      }
  }
  TensorProduct<K> t;
  t.left_dim = dm;
  t.right_dim = dn;
  t.quotient = quotient_space(plain, sparse_row_space(k, plain, rows));
  std::vector<Matrix<K>> l, r;
  for (const auto& b : m->left_actions()) l.push_back(t.projection() * kron_times(b, id_n, t.section()));
  for (const auto& c : n->right_actions()) r.push_back(t.projection() * kron_times(id_m, c, t.section()));
  t.module = std::make_shared<Bimodule<K>>(m->left(), n->right(), t.quotient.dim, std::move(l), std::move(r));
  return t;
}

/// f (x) g between tensor products, for f right-linear and g left-linear
/// over the middle algebra.
template <class K>
Matrix<K> tensor_maps(const Matrix<K>& f, const Matrix<K>& g, const TensorProduct<K>& source, const TensorProduct<K>& target) {
  if (f.cols() != source.left_dim || g.cols() != source.right_dim || f.rows() != target.left_dim || g.rows() != target.right_dim)
    throw DimensionMismatch("tensor_maps: factor shapes do not match the tensor products");
  return target.projection() * kron_times(f, g, source.section());
}

/// True iff a plain-level linear map annihilates the tensor relations, so it
/// descends to the quotient.
template <class K>
bool descends(const Matrix<K>& plain_map, const TensorProduct<K>& t) {
  return (plain_map * t.quotient.relations.columns()).is_zero();
}

/// Multiplication B (x)_A B -> B for a ring map A -> B.
template <class K>
struct Multiplication {
  TensorProduct<K> tensor;
  BimoduleMap<K> map;
};

template <class K>
Multiplication<K> multiplication_map(const RingMap<K>& f) {
  require_valid(f);
  const auto& b = *f.target;
  Multiplication<K> out;
  out.tensor = tensor_over(regular_over(f), regular_under(f), "B (x)_A B");
  Matrix<K> plain(b.field(), b.dim(), b.dim() * b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) plain.set_col(i * b.dim() + j, b.product(i, j));
  if (!descends(plain, out.tensor)) throw Error("multiplication does not descend to the tensor product");
  out.map = {out.tensor.module, regular_bimodule(f.target), plain * out.tensor.section()};
  return out;
}

// -------------------------------------------------------------- evaluation

/// F(Y) = M (x)_A _B Hom(M, Y) together with the counit m (x) f |-> (m) f.
template <class K>
struct Comonad {
  HomSpace<K> hom;
  TensorProduct<K> tensor;
  BimoduleMap<K> counit;
};

template <class K>
Comonad<K> comonad_apply(const BimodulePtr<K>& m, const BimodulePtr<K>& y, const std::string& label = "M (x) Hom(M, Y)") {
  Comonad<K> c;
  c.hom = hom_left(m, y, "Hom(M, Y) for " + label);
  c.tensor = tensor_over(m, c.hom.module, label);
  const auto h = c.hom.dim();
  Matrix<K> plain(m->field(), y->dim(), m->dim() * h);
  for (std::size_t i = 0; i < m->dim(); ++i)
    for (std::size_t j = 0; j < h; ++j)
      for (std::size_t r = 0; r < y->dim(); ++r) plain(r, i * h + j) = c.hom.basis[j](r, i);
  if (!descends(plain, c.tensor)) throw Error("evaluation does not descend to the tensor product");
  c.counit = {c.tensor.module, y, plain * c.tensor.section()};
  return c;
}

/// ev_M : M (x)_A *M -> B, with the dual and the tensor product it lives on.
template <class K>
Comonad<K> evaluation_map(const BimodulePtr<K>& m) {
  return comonad_apply(m, regular_bimodule(m->left()), "M (x)_A *M");
}

// -------------------------------------------------------------- endomorphisms

template <class K>
struct Endomorphisms {
  AlgebraPtr<K> algebra;    // S = End_B(M), product "apply f then g"
  RingMap<K> canonical;     // i : A -> S, a |-> (m |-> m a)
  BimodulePtr<K> module;    // M as a B-S bimodule
  HomSpace<K> hom;          // the concrete matrices behind the basis of S
};

template <class K>
Endomorphisms<K> endomorphism_ring(const BimodulePtr<K>& m) {
  const auto& k = m->field();
  Endomorphisms<K> e;
  e.hom = hom_left(m, m);
  const auto d = e.hom.dim();
  if (d == 0) throw PreconditionError("endomorphism ring of the zero module is the zero ring");
  std::vector<std::vector<std::vector<typename K::Element>>> table(d, std::vector<std::vector<typename K::Element>>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      auto c = e.hom.coordinates(e.hom.basis[j] * e.hom.basis[i]);
      for (std::size_t r = 0; r < d; ++r) table[i][j].push_back(c[r]);
    }
  auto u = e.hom.coordinates(Matrix<K>::identity(k, m->dim()));
  std::vector<typename K::Element> unit;
  std::vector<std::string> names;
  for (std::size_t r = 0; r < d; ++r) {
    unit.push_back(u[r]);
    names.push_back("s" + std::to_string(r));
  }
  e.algebra = std::make_shared<Algebra<K>>(k, d, table, unit, names);
  Matrix<K> i_mat(k, d, m->right()->dim());
  for (std::size_t a = 0; a < m->right()->dim(); ++a) i_mat.set_col(a, e.hom.coordinates(m->right_action(a)));
  e.canonical = {m->right(), e.algebra, i_mat};
  e.module = std::make_shared<Bimodule<K>>(m->left(), e.algebra, m->dim(), m->left_actions(), e.hom.basis);
  return e;
}

// -------------------------------------------------------------- predicates

template <class K>
struct GeneratorVerdict {
  bool value = false;
  std::size_t image_rank = 0;
  std::optional<Matrix<K>> preimage_of_unit;  // coordinates in M (x)_A *M
  std::optional<Matrix<K>> cokernel_functional;  // row y with y ev = 0, y 1_B = 1
};

/// Generator in B-Mod iff ev_M is surjective.
template <class K>
GeneratorVerdict<K> is_generator(const BimodulePtr<K>& m) {
  auto ev = evaluation_map(m);
  GeneratorVerdict<K> v;
  v.image_rank = rank(ev.counit.matrix);
  v.value = v.image_rank == m->left()->dim();
  const auto& unit = m->left()->unit();
  if (v.value) {
    v.preimage_of_unit = solve_affine(ev.counit.matrix, unit)->particular;
  } else {
    v.cokernel_functional = infeasibility_certificate(ev.counit.matrix, unit);
  }
  return v;
}

/// Dual basis {(x_i, f_i)}: y = sum_i ((y) f_i) x_i for all y.
template <class K>
struct DualBasis {
  std::vector<std::size_t> elements;  // x_i = basis vector e_{elements[i]} of M
  std::vector<Matrix<K>> functionals; // f_i as matrices
};

template <class K>
struct ProjectivityVerdict {
  bool value = false;
  std::optional<DualBasis<K>> dual_basis;
};

namespace detail {

/// Solve sum c_{ij} Theta_{ij} = id_M where Theta_{ij}(y) = act(f_j(y)) e_i.
template <class K, class Act>
ProjectivityVerdict<K> dual_basis_solve(const BimodulePtr<K>& m, const std::vector<Matrix<K>>& functionals, Act act) {
  const auto& k = m->field();
  const auto dm = m->dim();
  const auto h = functionals.size();
  Matrix<K> c(k, dm * dm, dm * h);
  for (std::size_t i = 0; i < dm; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      Matrix<K> theta(k, dm, dm);
      for (std::size_t y = 0; y < dm; ++y) theta.set_col(y, act(functionals[j].col(y)) * Matrix<K>::unit_vector(k, dm, i));
      auto v = theta.vec();
      for (std::size_t e = 0; e < dm * dm; ++e) c(e, i * h + j) = v[e];
    }
  auto sol = solve_affine(c, Matrix<K>::identity(k, dm).vec());
  ProjectivityVerdict<K> out;
  out.value = sol.has_value();
  if (sol) {
    DualBasis<K> db;
    for (std::size_t i = 0; i < dm; ++i) {
      Matrix<K> f(k, functionals.empty() ? 0 : functionals[0].rows(), dm);
      bool any = false;
      for (std::size_t j = 0; j < h; ++j) {
        const auto& coef = sol->particular[i * h + j];
        if (!is_zero(coef)) {
          f.add_scaled(coef, functionals[j]);
          any = true;
        }
      }
      if (any) {
        db.elements.push_back(i);
        db.functionals.push_back(std::move(f));
      }
    }
    out.dual_basis = std::move(db);
  }
  return out;
}

}  // namespace detail

/// Finitely generated projective as a left module over the left algebra.
template <class K>
ProjectivityVerdict<K> is_fg_projective_left(const BimodulePtr<K>& m) {
  auto dual = dual_module(m);
  return detail::dual_basis_solve<K>(m, dual.basis, [&](const Matrix<K>& b) { return m->act_left(b); });
}

/// Finitely generated projective as a right module over the right algebra.
template <class K>
ProjectivityVerdict<K> is_fg_projective_right(const BimodulePtr<K>& m) {
  auto a_reg = regular_bimodule(m->right());
  auto space = hom_right_space(m, a_reg);
  std::vector<Matrix<K>> gs;
  for (std::size_t r = 0; r < space.dim(); ++r) {
    Matrix<K> g(m->field(), a_reg->dim(), m->dim());
    for (std::size_t e = 0; e < g.rows() * g.cols(); ++e) g[e] = space.basis(r, e);
    gs.push_back(std::move(g));
  }
  return detail::dual_basis_solve<K>(m, gs, [&](const Matrix<K>& a) { return m->act_right(a); });
}

/// Re-checks a dual basis: sum_i ((y) f_i) x_i = y for every basis vector y.
template <class K, class Act>
bool verify_dual_basis(const BimodulePtr<K>& m, const DualBasis<K>& db, Act act) {
  const auto& k = m->field();
  Matrix<K> total(k, m->dim(), m->dim());
  for (std::size_t i = 0; i < db.elements.size(); ++i)
    for (std::size_t y = 0; y < m->dim(); ++y) {
      auto img = act(db.functionals[i].col(y)) * Matrix<K>::unit_vector(k, m->dim(), db.elements[i]);
      for (std::size_t r = 0; r < m->dim(); ++r) total(r, y) += img[r];
    }
  return total == Matrix<K>::identity(k, m->dim());
}

/// Tr_M(N): the span of the images of all left B-linear maps M -> N.
template <class K>
Subspace<K> trace_in(const BimodulePtr<K>& m, const BimodulePtr<K>& n) {
  auto h = hom_left(m, n);
  std::vector<Matrix<K>> blocks = h.basis;
  return column_space(hstack(m->field(), n->dim(), blocks));
}

/// ev over S = End_B(M): M (x)_S Hom(M, N) -> N.
template <class K>
Comonad<K> evaluation_over_endomorphisms(const BimodulePtr<K>& m, const BimodulePtr<K>& n) {
  auto e = endomorphism_ring(m);
  return comonad_apply(e.module, n, "M (x)_S Hom(M, N)");
}

template <class K>
BimoduleMap<K> ev_over_S(const BimodulePtr<K>& m) {
  return evaluation_over_endomorphisms(m, regular_bimodule(m->left())).counit;
}

/// N is M-static iff M (x)_S Hom(M, N) -> N is an isomorphism.
template <class K>
bool static_check(const BimodulePtr<K>& m, const BimodulePtr<K>& n) {
  return is_isomorphism(evaluation_over_endomorphisms(m, n).counit);
}

}  // namespace bimod
