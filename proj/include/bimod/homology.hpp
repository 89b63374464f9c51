#pragma once

// The relative bar resolution F^{n+1}(B) for F = M (x)_A Hom_B(M, -), the
// M-relative Hochschild cohomology it computes, the A-relative Hochschild
// complex of a ring map A -> S, syzygies, and the comparison maps Phi_n
// between the two cohomology theories for a progenerator M.

#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bimod/algebra.hpp"
#include "bimod/bimodule.hpp"
#include "bimod/error.hpp"
#include "bimod/exactlin.hpp"
#include "bimod/matrix.hpp"

namespace bimod {

template <class K>
struct ChainComplex {
  BimodulePtr<K> augmentation_target;  // B
  std::vector<BimodulePtr<K>> objects;  // P_0, P_1, ...
  std::vector<Matrix<K>> differentials; // d_n : P_n -> P_{n-1}; d_0 : P_0 -> B
};

template <class K>
struct CohomologyDegree {
  std::size_t cochain_dim = 0;
  std::size_t cocycle_dim = 0;
  std::size_t coboundary_dim = 0;
  std::size_t dim = 0;
  std::vector<Matrix<K>> representatives;  // cocycles spanning a complement of the coboundaries
};

template <class K>
struct CohomologyResult {
  std::vector<CohomologyDegree<K>> degrees;

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& x : degrees) d.push_back(x.dim);
    return d;
  }
};

namespace detail {

/// Index of the single nonzero (equal to one) entry of column j.
template <class K>
std::size_t unit_index(const Matrix<K>& m, std::size_t j) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!is_zero(m(i, j))) return i;
  throw Error("section column is zero");
}

/// Cocycles, coboundaries and representatives in one degree. `cocycles` is
/// a kernel in free-variable form over the cochain coordinates; the columns
/// of `coboundaries` are cochain coordinates.
template <class K>
CohomologyDegree<K> assemble_degree(const HomSpace<K>& cochains, const Subspace<K>& cocycles, const Matrix<K>& coboundaries) {
  const auto& k = cochains.module->field();
  CohomologyDegree<K> d;
  d.cochain_dim = cochains.dim();
  d.cocycle_dim = cocycles.dim();
  d.coboundary_dim = rank(coboundaries);
  std::vector<std::vector<typename K::Element>> rows;
  for (std::size_t j = 0; j < coboundaries.cols(); ++j) {
    auto c = cocycles.coordinates(coboundaries.col(j));
    if (cocycles.columns() * c != coboundaries.col(j)) throw Error("coboundary is not a cocycle");
    std::vector<typename K::Element> row;
    for (std::size_t r = 0; r < c.rows(); ++r) row.push_back(c[r]);
    rows.push_back(std::move(row));
  }
  auto q = quotient_space(cocycles.dim(), Matrix<K>::from_rows(k, cocycles.dim(), rows));
  d.dim = q.dim;
  auto zcols = cocycles.columns();
  for (std::size_t i = 0; i < q.dim; ++i) d.representatives.push_back(cochains.realize(zcols * q.section.col(i)));
  return d;
}

/// Decomposes a plain index into n digits base s, most significant first.
inline std::vector<std::size_t> digits(std::size_t index, std::size_t base, std::size_t n) {
  std::vector<std::size_t> t(n);
  for (std::size_t p = n; p-- > 0;) {
    t[p] = index % base;
    index /= base;
  }
  return t;
}

inline std::size_t undigits(const std::vector<std::size_t>& t, std::size_t base) {
  std::size_t r = 0;
  for (auto x : t) r = r * base + x;
  return r;
}

}  // namespace detail

// -------------------------------------------------------------- bar resolution

/// P_{-1} = B and P_n = F(P_{n-1}); stage n holds F applied to P_{n-1}.
/// Stages and differentials are built on demand and cached.
template <class K>
class BarResolution {
 public:
  explicit BarResolution(BimodulePtr<K> m) : m_(std::move(m)), base_(regular_bimodule(m_->left())) {
    if (rank(stage(0).counit.matrix) != m_->left()->dim())
      throw PreconditionError("M is not a generator; the relative bar complex is not a resolution of B");
  }

  const BimodulePtr<K>& module() const { return m_; }

  /// P_n for n >= -1.
  BimodulePtr<K> object(long n) { return n < 0 ? base_ : stage(static_cast<std::size_t>(n)).tensor.module; }

  const Comonad<K>& stage(std::size_t n) {
    while (stages_.size() <= n) {
      auto y = stages_.empty() ? base_ : stages_.back().tensor.module;
      stages_.push_back(comonad_apply(m_, y, "tensor power F^" + std::to_string(stages_.size() + 1) + "(B)"));
    }
    return stages_[n];
  }

  /// F(g) : P_{l+1} -> P_l for a bimodule map g : P_l -> P_{l-1}.
  Matrix<K> fmap(const Matrix<K>& g, std::size_t l) {
    const auto& src = stage(l + 1);
    const auto& tgt = stage(l);
    Matrix<K> hg(m_->field(), tgt.hom.dim(), src.hom.dim());
    for (std::size_t j = 0; j < src.hom.dim(); ++j) hg.set_col(j, tgt.hom.coordinates(g * src.hom.basis[j]));
    return tensor_maps(Matrix<K>::identity(m_->field(), m_->dim()), hg, src.tensor, tgt.tensor);
  }

  /// F^i(eps_{P_{j-1}}) : P_{j+i} -> P_{j+i-1}.
  const Matrix<K>& iterated_counit(std::size_t i, std::size_t j) {
    auto key = std::make_pair(i, j);
    if (auto it = faces_.find(key); it != faces_.end()) return it->second;
    Matrix<K> g = i == 0 ? stage(j).counit.matrix : fmap(iterated_counit(i - 1, j), j + i - 1);
    return faces_.emplace(key, std::move(g)).first->second;
  }

  /// d_n = sum_{i=0}^{n} (-1)^i F^i(eps_{F^{n-i} B}) : P_n -> P_{n-1}.
  const Matrix<K>& differential(std::size_t n) {
    while (diffs_.size() <= n) {
      const auto d = diffs_.size();
      Matrix<K> sum(m_->field(), object(static_cast<long>(d) - 1)->dim(), object(static_cast<long>(d))->dim());
      for (std::size_t i = 0; i <= d; ++i) {
        if (i % 2 == 0) sum += iterated_counit(i, d - i);
        else sum -= iterated_counit(i, d - i);
      }
      diffs_.push_back(std::move(sum));
    }
    return diffs_[n];
  }

  /// P_0 .. P_{depth-1} with d_0 .. d_{depth-1}.
  ChainComplex<K> complex(std::size_t depth) {
    ChainComplex<K> c;
    c.augmentation_target = base_;
    for (std::size_t n = 0; n < depth; ++n) {
      c.objects.push_back(object(static_cast<long>(n)));
      c.differentials.push_back(differential(n));
    }
    return c;
  }

  /// Hom_B(M, d_n) : Hom(M, P_n) -> Hom(M, P_{n-1}) in Hom-space coordinates.
  Matrix<K> hom_of_differential(std::size_t n) {
    const auto& d = differential(n);
    const auto& src = stage(n + 1).hom;
    const auto& tgt = stage(n).hom;
    Matrix<K> r(m_->field(), tgt.dim(), src.dim());
    for (std::size_t j = 0; j < src.dim(); ++j) r.set_col(j, tgt.coordinates(d * src.basis[j]));
    return r;
  }

  /// s_n : Hom(M, P_n) -> Hom(M, P_{n+1}), f |-> (x |-> x (x) f), for n >= -1.
  Matrix<K> homotopy(long n) {
    const auto& st = stage(static_cast<std::size_t>(n + 1));
    const auto& next = stage(static_cast<std::size_t>(n + 2)).hom;
    const auto h = st.hom.dim();
    const auto dm = m_->dim();
    Matrix<K> r(m_->field(), next.dim(), h);
    for (std::size_t j = 0; j < h; ++j) {
      Matrix<K> x(m_->field(), st.tensor.module->dim(), dm);
      for (std::size_t i = 0; i < dm; ++i) x.set_col(i, st.tensor.projection().col(i * h + j));
      r.set_col(j, next.coordinates(x));
    }
    return r;
  }

 private:
  BimodulePtr<K> m_;
  BimodulePtr<K> base_;
  std::deque<Comonad<K>> stages_;
  std::deque<Matrix<K>> diffs_;
  std::map<std::pair<std::size_t, std::size_t>, Matrix<K>> faces_;
};

template <class K>
ChainComplex<K> bar_resolution(const BimodulePtr<K>& m, std::size_t depth) {
  if (depth == 0) throw PreconditionError("bar_resolution: depth must be at least 1");
  BarResolution<K> r(m);
  return r.complex(depth);
}

/// d_n d_{n+1} = 0 for all adjacent pairs, and every d_n is a bimodule map.
template <class K>
bool complex_is_valid(const ChainComplex<K>& c) {
  for (std::size_t n = 0; n < c.differentials.size(); ++n) {
    auto tgt = n == 0 ? c.augmentation_target : c.objects[n - 1];
    if (!validate_map(BimoduleMap<K>{c.objects[n], tgt, c.differentials[n]})) return false;
    if (n + 1 < c.differentials.size() && !(c.differentials[n] * c.differentials[n + 1]).is_zero()) return false;
  }
  return true;
}

struct HomotopyReport {
  bool ok = true;
  std::vector<bool> identities;  // degree -1, 0, ..., depth-1
};

/// Contracting homotopy of Hom_B(M, -) applied to the augmented complex.
template <class K>
HomotopyReport homotopy_check(const BimodulePtr<K>& m, std::size_t depth) {
  if (depth == 0) throw PreconditionError("homotopy_check: depth must be at least 1");
  BarResolution<K> r(m);
  HomotopyReport rep;
  auto push = [&](bool v) {
    rep.identities.push_back(v);
    rep.ok = rep.ok && v;
  };
  {
    auto lhs = r.hom_of_differential(0) * r.homotopy(-1);
    push(lhs == Matrix<K>::identity(m->field(), lhs.rows()));
  }
  for (std::size_t n = 0; n < depth; ++n) {
    auto lhs = r.hom_of_differential(n + 1) * r.homotopy(static_cast<long>(n)) +
               r.homotopy(static_cast<long>(n) - 1) * r.hom_of_differential(n);
    push(lhs == Matrix<K>::identity(m->field(), lhs.rows()));
  }
  return rep;
}

/// H^n_M(B, N) for n = 0..nmax from K^n = Hom_{B-B}(P_n, N), delta f = f d_{n+1}.
template <class K>
CohomologyResult<K> m_hochschild(BarResolution<K>& r, const BimodulePtr<K>& n_coeff, std::size_t nmax) {
  const auto& m = r.module();
  if (!same_algebra(n_coeff->left(), m->left()) || !same_algebra(n_coeff->right(), m->left()))
    throw DimensionMismatch("m_hochschild: coefficients must be a B-B bimodule");
  const auto& k = m->field();
  CohomologyResult<K> res;
  std::optional<HomSpace<K>> prev;
  for (std::size_t n = 0; n <= nmax; ++n) {
    auto kn = hom_bimodule(r.object(static_cast<long>(n)), n_coeff,
                           "cochains Hom(P_" + std::to_string(n) + ", N) on F^" + std::to_string(n + 1) + "(B)");
    const auto& dnext = r.differential(n + 1);
    Matrix<K> cons(k, n_coeff->dim() * dnext.cols(), kn.dim());
    for (std::size_t j = 0; j < kn.dim(); ++j) cons.set_col(j, (kn.basis[j] * dnext).vec());
    auto z = kernel_basis(cons);
    Matrix<K> bnd(k, kn.dim(), prev ? prev->dim() : 0);
    if (prev) {
      const auto& d = r.differential(n);
      for (std::size_t j = 0; j < prev->dim(); ++j) bnd.set_col(j, kn.coordinates(prev->basis[j] * d));
    }
    res.degrees.push_back(detail::assemble_degree(kn, z, bnd));
    prev = std::move(kn);
  }
  return res;
}

template <class K>
CohomologyResult<K> m_hochschild(const BimodulePtr<K>& m, const BimodulePtr<K>& n_coeff, std::size_t nmax) {
  BarResolution<K> r(m);
  return m_hochschild(r, n_coeff, nmax);
}

/// Omega^0 = B, Omega^n = ker d_{n-1} inside P_{n-1}.
template <class K>
Submodule<K> syzygy(BarResolution<K>& r, std::size_t n) {
  if (n == 0) {
    auto b = r.object(-1);
    return submodule(b, full_subspace(b->field(), b->dim()));
  }
  return submodule(r.object(static_cast<long>(n) - 1), kernel_basis(r.differential(n - 1)));
}

template <class K>
Submodule<K> syzygy(const BimodulePtr<K>& m, std::size_t n) {
  BarResolution<K> r(m);
  return syzygy(r, n);
}

// -------------------------------------------------------------- relative complex

/// S^{(x)_A n} with its composite projection from and section into the plain
/// n-fold tensor power of S (digits of a plain index are S basis indices).
template <class K>
struct TensorPower {
  BimodulePtr<K> module;
  Matrix<K> projection;  // dim x s^n
  Matrix<K> section;     // s^n x dim
};

/// The A-relative Hochschild complex C^n = Hom_{A-A}(S^{(x)_A n}, W) with
/// coboundaries b^n : C^n -> C^{n+1} in cochain coordinates.
template <class K>
struct RelativeComplex {
  RingMap<K> map;
  BimodulePtr<K> coefficients;
  std::vector<TensorPower<K>> powers;  // index n >= 1 used; index 0 unused
  std::vector<HomSpace<K>> cochains;   // C^0 .. C^{nmax+1}
  std::vector<Matrix<K>> coboundaries; // b^0 .. b^{nmax}

  /// b^n applied to a cochain given as a matrix W x dim T_n (or W x dim A for n = 0).
  Matrix<K> apply(std::size_t n, const Matrix<K>& f) const;

  Matrix<K> left_unit_inverse;   // S -> S (x)_A A
  Matrix<K> right_unit_inverse;  // S -> A (x)_A S
  Matrix<K> left_unit_section;
  Matrix<K> right_unit_section;
};

template <class K>
Matrix<K> RelativeComplex<K>::apply(std::size_t n, const Matrix<K>& f) const {
  const auto& s = *map.target;
  const auto& a = *map.source;
  const auto& w = *coefficients;
  const auto& k = s.field();
  const auto sd = s.dim();
  if (n == 0) {
    // s (x) a |-> s . f(a) and a (x) s |-> f(a) . s through the unit isomorphisms.
    Matrix<K> lp(k, w.dim(), sd * a.dim());
    Matrix<K> rp(k, w.dim(), a.dim() * sd);
    for (std::size_t j = 0; j < sd; ++j)
      for (std::size_t q = 0; q < a.dim(); ++q) {
        lp.set_col(j * a.dim() + q, w.left_action(j) * f.col(q));
        rp.set_col(q * sd + j, w.right_action(j) * f.col(q));
      }
    return lp * left_unit_section * left_unit_inverse - rp * right_unit_section * right_unit_inverse;
  }
  const auto& tn = powers[n];
  const auto& tn1 = powers[n + 1];
  auto g = f * tn.projection;  // W x s^n
  Matrix<K> out(k, w.dim(), tn1.module->dim());
  const auto sign_right = (n + 1) % 2 == 0;
  for (std::size_t q = 0; q < tn1.module->dim(); ++q) {
    auto idx = detail::unit_index(tn1.section, q);
    auto t = detail::digits(idx, sd, n + 1);
    Matrix<K> col(k, w.dim(), 1);
    std::vector<std::size_t> rest(t.begin() + 1, t.end());
    col += w.left_action(t[0]) * g.col(detail::undigits(rest, sd));
    for (std::size_t i = 1; i <= n; ++i) {
      auto prod = s.product(t[i - 1], t[i]);
      std::vector<std::size_t> merged;
      for (std::size_t p = 0; p < i - 1; ++p) merged.push_back(t[p]);
      merged.push_back(0);
      for (std::size_t p = i + 1; p <= n; ++p) merged.push_back(t[p]);
      for (std::size_t c = 0; c < sd; ++c) {
        if (is_zero(prod[c])) continue;
        merged[i - 1] = c;
        auto gc = g.col(detail::undigits(merged, sd));
        if (i % 2 == 0) col.add_scaled(prod[c], gc);
        else col.add_scaled(-prod[c], gc);
      }
    }
    std::vector<std::size_t> init(t.begin(), t.end() - 1);
    auto rt = w.right_action(t[n]) * g.col(detail::undigits(init, sd));
    if (sign_right) col += rt;
    else col -= rt;
    out.set_col(q, col);
  }
  return out;
}

template <class K>
RelativeComplex<K> relative_complex(const RingMap<K>& f, const BimodulePtr<K>& w, std::size_t nmax) {
  require_valid(f);
  if (!same_algebra(w->left(), f.target) || !same_algebra(w->right(), f.target))
    throw DimensionMismatch("rel_hochschild: coefficients must be an S-S bimodule");
  const auto& k = f.target->field();
  const auto sd = f.target->dim();
  RelativeComplex<K> rc;
  rc.map = f;
  rc.coefficients = w;
  auto w_aa = restrict_scalars<K>(w, &f, &f);
  auto a_reg = regular_bimodule(f.source);
  auto s_sa = regular_over(f);
  auto s_as = regular_under(f);

  // Unit isomorphisms S (x)_A A -> S and A (x)_A S -> S, inverted.
  {
    auto tl = tensor_over(s_sa, a_reg, "S (x)_A A");
    auto tr = tensor_over(a_reg, s_as, "A (x)_A S");
    const auto ad = f.source->dim();
    Matrix<K> ml(k, sd, sd * ad), mr(k, sd, ad * sd);
    for (std::size_t j = 0; j < sd; ++j)
      for (std::size_t q = 0; q < ad; ++q) {
        ml.set_col(j * ad + q, f.target->multiply(f.target->basis_vector(j), f.image(q)));
        mr.set_col(q * sd + j, f.target->multiply(f.image(q), f.target->basis_vector(j)));
      }
    rc.left_unit_section = tl.section();
    rc.right_unit_section = tr.section();
    rc.left_unit_inverse = inverse(ml * tl.section());
    rc.right_unit_inverse = inverse(mr * tr.section());
  }

  rc.powers.resize(nmax + 2);
  rc.powers[1] = {regular_bimodule(f.target), Matrix<K>::identity(k, sd), Matrix<K>::identity(k, sd)};
  std::size_t plain = sd;
  for (std::size_t n = 2; n <= nmax + 1; ++n) {
    plain *= sd;
    check_dimension(plain, "tensor power S^(x)" + std::to_string(n));
    auto t = tensor_over(restrict_right(rc.powers[n - 1].module, f), s_as, "tensor power S^(x)" + std::to_string(n));
    auto id = Matrix<K>::identity(k, sd);
    rc.powers[n] = {t.module, times_kron(t.projection(), rc.powers[n - 1].projection, id),
                    kron_times(rc.powers[n - 1].section, id, t.section())};
  }
  rc.cochains.push_back(hom_bimodule(a_reg, w_aa));
  for (std::size_t n = 1; n <= nmax + 1; ++n)
    rc.cochains.push_back(hom_bimodule(restrict_scalars<K>(rc.powers[n].module, &f, &f), w_aa));
  for (std::size_t n = 0; n <= nmax; ++n) {
    const auto& src = rc.cochains[n];
    const auto& tgt = rc.cochains[n + 1];
    Matrix<K> b(k, tgt.dim(), src.dim());
    for (std::size_t j = 0; j < src.dim(); ++j) b.set_col(j, tgt.coordinates(rc.apply(n, src.basis[j])));
    rc.coboundaries.push_back(std::move(b));
  }
  return rc;
}

/// H^n(S|A, W) for n = 0..nmax.
template <class K>
CohomologyResult<K> rel_hochschild(const RelativeComplex<K>& rc) {
  CohomologyResult<K> res;
  const auto& k = rc.map.target->field();
  for (std::size_t n = 0; n + 1 < rc.cochains.size(); ++n) {
    auto z = kernel_basis(rc.coboundaries[n]);
    auto bnd = n == 0 ? Matrix<K>(k, rc.cochains[0].dim(), 0) : rc.coboundaries[n - 1];
    res.degrees.push_back(detail::assemble_degree(rc.cochains[n], z, bnd));
  }
  return res;
}

template <class K>
CohomologyResult<K> rel_hochschild(const RingMap<K>& f, const BimodulePtr<K>& w, std::size_t nmax) {
  return rel_hochschild(relative_complex(f, w, nmax));
}

// -------------------------------------------------------------- comparison maps

/// Tensor powers C^{(x)_B k} of C = M (x)_A *M with lazily memoized
/// projections of plain tuples (each entry a plain index m*h + phi of C).
template <class K>
class CPowers {
 public:
  CPowers(const Comonad<K>& ev) : ev_(ev) {}

  const BimodulePtr<K>& power(std::size_t k) {
    build(k);
    return modules_[k - 1];
  }

  Matrix<K> project(const std::vector<std::size_t>& t) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    Matrix<K> v;
    if (t.size() == 1) {
      v = ev_.tensor.projection().col(t[0]);
    } else {
      build(t.size());
      std::vector<std::size_t> prefix(t.begin(), t.end() - 1);
      auto left = project(prefix);
      const auto& step = steps_[t.size() - 2];
      const auto cd = ev_.tensor.module->dim();
      v = Matrix<K>(left.field(), step.module->dim(), 1);
      auto right = ev_.tensor.projection().col(t.back());
      for (std::size_t x = 0; x < left.rows(); ++x) {
        if (is_zero(left[x])) continue;
        for (std::size_t c = 0; c < cd; ++c) {
          if (is_zero(right[c])) continue;
          v.add_scaled(left[x] * right[c], step.projection().col(x * cd + c));
        }
      }
    }
    return memo_.emplace(t, v).first->second;
  }

  /// The plain tuple that the section assigns to basis vector q of C^{(x)k}.
  std::vector<std::size_t> section_tuple(std::size_t k, std::size_t q) {
    build(k);
    std::vector<std::size_t> t(k);
    for (std::size_t p = k; p-- > 1;) {
      const auto& step = steps_[p - 1];
      auto idx = detail::unit_index(step.section(), q);
      const auto cd = ev_.tensor.module->dim();
      t[p] = detail::unit_index(ev_.tensor.section(), idx % cd);
      q = idx / cd;
    }
    t[0] = detail::unit_index(ev_.tensor.section(), q);
    return t;
  }

 private:
  void build(std::size_t k) {
    if (modules_.empty()) modules_.push_back(ev_.tensor.module);
    while (modules_.size() < k) {
      steps_.push_back(tensor_over(modules_.back(), ev_.tensor.module, "tensor power C^(x)" + std::to_string(modules_.size() + 1)));
      modules_.push_back(steps_.back().module);
    }
  }

  const Comonad<K>& ev_;
  std::vector<BimodulePtr<K>> modules_;
  std::vector<TensorProduct<K>> steps_;
  std::map<std::vector<std::size_t>, Matrix<K>> memo_;
};

struct PhiReport {
  bool ok = true;
  std::vector<bool> isomorphisms;  // Phi_0 .. Phi_nmax
  std::vector<bool> squares;       // initial square, then degrees 1 .. nmax
  std::vector<std::size_t> source_dims;
  std::vector<std::size_t> target_dims;
};

/// *M (x)_B N (x)_B M over S for a progenerator M, with the pieces needed to
/// compare the two cohomology theories.
template <class K>
class MoritaComparison {
 public:
  MoritaComparison(const BimodulePtr<K>& m, const BimodulePtr<K>& n_coeff, std::size_t nmax)
      : m_(m), n_(n_coeff), ev_(evaluation_map(m)), powers_(ev_) {
    if (rank(ev_.counit.matrix) != m->left()->dim()) throw PreconditionError("M is not a generator");
    if (!is_fg_projective_left(m).value) throw PreconditionError("M is not finitely generated projective as a left module");
    if (!same_algebra(n_coeff->left(), m->left()) || !same_algebra(n_coeff->right(), m->left()))
      throw DimensionMismatch("coefficients must be a B-B bimodule");
    const auto& k = m->field();
    end_ = endomorphism_ring(m);
    dual_s_ = dual_module(end_.module);
    if (dual_s_.basis != ev_.hom.basis) throw Error("dual bases over A and over S differ");
    auto wx = tensor_over(dual_s_.module, n_coeff, "*M (x)_B N");
    auto wt = tensor_over(wx.module, end_.module, "*M (x)_B N (x)_B M");
    w_ = wt.module;
    w_proj_ = times_kron(wt.projection(), wx.projection(), Matrix<K>::identity(k, m->dim()));
    w_sec_ = kron_times(wx.section(), Matrix<K>::identity(k, m->dim()), wt.section());
    // kappa : *M (x)_B M -> S, phi (x) x |-> (y |-> phi(y) x); delta is its inverse.
    auto dt = tensor_over(dual_s_.module, end_.module, "*M (x)_B M");
    const auto h = dual_s_.dim();
    const auto dm = m->dim();
    Matrix<K> kp(k, end_.algebra->dim(), h * dm);
    for (std::size_t p = 0; p < h; ++p)
      for (std::size_t x = 0; x < dm; ++x) {
        Matrix<K> e(k, dm, dm);
        for (std::size_t y = 0; y < dm; ++y) e.set_col(y, m->act_left(dual_s_.basis[p].col(y)).col(x));
        kp.set_col(p * dm + x, end_.hom.coordinates(e));
      }
    if (!descends(kp, dt)) throw Error("kappa does not descend");
    auto kappa = kp * dt.section();
    if (kappa.rows() != kappa.cols()) throw PreconditionError("*M (x)_B M is not isomorphic to End(M)");
    delta_plain_ = dt.section() * inverse(kappa);
    rel_ = relative_complex(end_.canonical, w_, nmax);
    nmax_ = nmax;
  }

  const Endomorphisms<K>& endomorphisms() const { return end_; }
  const BimodulePtr<K>& coefficients() const { return w_; }
  const RelativeComplex<K>& relative() const { return rel_; }
  CPowers<K>& powers() { return powers_; }

  /// Bimodule maps C^{(x)_B k} -> N.
  const HomSpace<K>& source_cochains(std::size_t k) {
    while (hom_.size() < k) hom_.push_back(hom_bimodule(powers_.power(hom_.size() + 1), n_));
    return hom_[k - 1];
  }

  /// (d* f) = sum_i (-1)^i f . face_i for f : C^{(x)k} -> N (k = 0 means f : B -> N).
  Matrix<K> dual_differential(std::size_t k, const Matrix<K>& f) {
    const auto& kf = m_->field();
    const auto kk = k + 1;
    auto target = powers_.power(kk);
    Matrix<K> out(kf, n_->dim(), target->dim());
    const auto h = ev_.hom.dim();
    for (std::size_t q = 0; q < target->dim(); ++q) {
      auto t = powers_.section_tuple(kk, q);
      Matrix<K> col(kf, n_->dim(), 1);
      for (std::size_t i = 0; i < kk; ++i) {
        auto b = ev_.hom.basis[t[i] % h].col(t[i] / h);
        Matrix<K> term(kf, n_->dim(), 1);
        if (kk == 1) {
          term = f * b;
        } else if (i + 1 < kk) {
          auto mx = m_->act_left(b).col(t[i + 1] / h);
          auto rest = t;
          rest.erase(rest.begin() + static_cast<long>(i));
          for (std::size_t x = 0; x < m_->dim(); ++x) {
            if (is_zero(mx[x])) continue;
            rest[i] = x * h + t[i + 1] % h;
            term.add_scaled(mx[x], f * powers_.project(rest));
          }
        } else {
          auto phib = ev_.hom.module->act_right(b).col(t[i - 1] % h);
          auto rest = t;
          rest.pop_back();
          for (std::size_t p = 0; p < h; ++p) {
            if (is_zero(phib[p])) continue;
            rest[i - 1] = (t[i - 1] / h) * h + p;
            term.add_scaled(phib[p], f * powers_.project(rest));
          }
        }
        if (i % 2 == 0) col += term;
        else col -= term;
      }
      out.set_col(q, col);
    }
    return out;
  }

  /// Phi_n(f) as a matrix W x dim(S^{(x)_A n}) (W x dim A for n = 0), for f : C^{(x)(n+1)} -> N.
  Matrix<K> phi(std::size_t n, const Matrix<K>& f) {
    const auto& z = z_stage(n);
    const auto& kf = m_->field();
    auto ifi = w_proj_ * kron_times(kron(Matrix<K>::identity(kf, ev_.hom.dim()), f), Matrix<K>::identity(kf, m_->dim()), z.section);
    return ifi * z.j;
  }

  /// iota(nu) in W: nu inserted between the factors of delta(1).
  Matrix<K> insert(const Matrix<K>& nu) const {
    const auto& kf = m_->field();
    auto d1 = delta_plain_ * end_.algebra->unit();
    const auto dm = m_->dim();
    const auto nd = n_->dim();
    Matrix<K> plain(kf, ev_.hom.dim() * nd * dm, 1);
    for (std::size_t idx = 0; idx < d1.rows(); ++idx) {
      if (is_zero(d1[idx])) continue;
      auto p = idx / dm, x = idx % dm;
      for (std::size_t v = 0; v < nd; ++v)
        if (!is_zero(nu[v])) add_mul(plain[(p * nd + v) * dm + x], d1[idx], nu[v]);
    }
    return w_proj_ * plain;
  }

  PhiReport check() {
    const auto& kf = m_->field();
    PhiReport rep;
    auto record = [&](std::vector<bool>& v, bool x) {
      v.push_back(x);
      rep.ok = rep.ok && x;
    };
    for (std::size_t n = 0; n <= nmax_; ++n) {
      const auto& src = source_cochains(n + 1);
      const auto& tgt = rel_.cochains[n];
      Matrix<K> mat(kf, tgt.dim(), src.dim());
      bool in_target = true;
      for (std::size_t j = 0; j < src.dim(); ++j) {
        auto v = phi(n, src.basis[j]);
        auto c = tgt.coordinates(v);
        in_target = in_target && tgt.realize(c) == v;
        mat.set_col(j, c);
      }
      rep.source_dims.push_back(src.dim());
      rep.target_dims.push_back(tgt.dim());
      record(rep.isomorphisms, in_target && src.dim() == tgt.dim() && rank(mat) == src.dim());
    }
    // Initial square: Phi_0(g_nu . ev) = (a |-> iota(nu) . a).
    {
      auto inv = invariants(n_);
      auto cols = inv.columns();
      bool ok = true;
      for (std::size_t j = 0; j < inv.dim(); ++j) {
        auto nu = cols.col(j);
        Matrix<K> g(kf, n_->dim(), m_->left()->dim());
        for (std::size_t b = 0; b < m_->left()->dim(); ++b) g.set_col(b, n_->left_action(b) * nu);
        auto lhs = phi(0, dual_differential(0, g));
        auto iota = insert(nu);
        const auto& a = *m_->right();
        Matrix<K> rhs(kf, w_->dim(), a.dim());
        for (std::size_t q = 0; q < a.dim(); ++q) rhs.set_col(q, w_->act_right(end_.canonical.image(q)) * iota);
        ok = ok && lhs == rhs;
      }
      record(rep.squares, ok);
    }
    for (std::size_t n = 1; n <= nmax_; ++n) {
      const auto& src = source_cochains(n);
      bool ok = true;
      for (std::size_t j = 0; j < src.dim(); ++j) {
        auto lhs = phi(n, dual_differential(n, src.basis[j]));
        auto rhs = rel_.apply(n - 1, phi(n - 1, src.basis[j]));
        ok = ok && lhs == rhs;
      }
      record(rep.squares, ok);
    }
    return rep;
  }

 private:
  struct ZStage {
    Matrix<K> section;  // semi-plain (h x C^{(x)(n+1)} x m) -> Z, as semi-plain x dim Z
    Matrix<K> j;        // dim Z x dim(S^{(x)n})
  };

  /// Z_n = *M (x)_B C^{(x)(n+1)} (x)_B M and the map J_n into it.
  const ZStage& z_stage(std::size_t n) {
    if (auto it = z_.find(n); it != z_.end()) return it->second;
    const auto& kf = m_->field();
    const auto h = ev_.hom.dim();
    const auto dm = m_->dim();
    auto cpow = powers_.power(n + 1);
    auto zx = tensor_over(dual_s_.module, cpow, "*M (x)_B C^(x)" + std::to_string(n + 1));
    auto zt = tensor_over(zx.module, end_.module, "*M (x)_B C^(x)" + std::to_string(n + 1) + " (x)_B M");
    auto id_m = Matrix<K>::identity(kf, dm);
    auto proj = times_kron(zt.projection(), zx.projection(), id_m);
    ZStage st;
    st.section = kron_times(zx.section(), id_m, zt.section());
    const auto sd = end_.algebra->dim();
    const std::size_t columns = n == 0 ? m_->right()->dim() : rel_.powers[n].module->dim();
    st.j = Matrix<K>(kf, zt.module->dim(), columns);
    const auto cdim = cpow->dim();
    for (std::size_t q = 0; q < columns; ++q) {
      std::vector<Matrix<K>> factors;
      factors.push_back(delta_plain_ * end_.algebra->unit());
      if (n == 0) {
        factors.push_back(delta_plain_ * end_.canonical.image(q));
      } else {
        auto t = detail::digits(detail::unit_index(rel_.powers[n].section, q), sd, n);
        for (auto s : t) factors.push_back(delta_plain_.col(s));
        factors.push_back(delta_plain_ * end_.algebra->unit());
      }
      Matrix<K> semi(kf, h * cdim * dm, 1);
      // Enumerate the nonzero entries of the Kronecker product of the factors.
      std::vector<std::vector<std::size_t>> nz(factors.size());
      for (std::size_t f = 0; f < factors.size(); ++f)
        for (std::size_t e = 0; e < factors[f].rows(); ++e)
          if (!is_zero(factors[f][e])) nz[f].push_back(e);
      bool empty = false;
      for (const auto& v : nz) empty = empty || v.empty();
      if (!empty) {
        std::vector<std::size_t> pos(factors.size(), 0);
        while (true) {
          typename K::Element coef = kf.one();
          std::vector<std::size_t> tuple;
          std::size_t first = 0, last = 0;
          for (std::size_t f = 0; f < factors.size(); ++f) {
            auto e = nz[f][pos[f]];
            coef *= factors[f][e];
            auto p = e / dm, x = e % dm;
            if (f == 0) first = p;
            else tuple.back() += p;
            if (f + 1 == factors.size()) last = x;
            else tuple.push_back(x * h);
          }
          auto v = powers_.project(tuple);
          for (std::size_t c = 0; c < cdim; ++c)
            if (!is_zero(v[c])) add_mul(semi[(first * cdim + c) * dm + last], coef, v[c]);
          std::size_t f = factors.size();
          while (f-- > 0) {
            if (++pos[f] < nz[f].size()) break;
            pos[f] = 0;
          }
          if (f == static_cast<std::size_t>(-1)) break;
        }
      }
      st.j.set_col(q, proj * semi);
    }
    return z_.emplace(n, std::move(st)).first->second;
  }

  BimodulePtr<K> m_;
  BimodulePtr<K> n_;
  Comonad<K> ev_;
  CPowers<K> powers_;
  Endomorphisms<K> end_;
  HomSpace<K> dual_s_;
  BimodulePtr<K> w_;
  Matrix<K> w_proj_;
  Matrix<K> w_sec_;
  Matrix<K> delta_plain_;
  RelativeComplex<K> rel_;
  std::size_t nmax_ = 0;
  std::vector<HomSpace<K>> hom_;
  std::map<std::size_t, ZStage> z_;
};

template <class K>
PhiReport phi_check(const BimodulePtr<K>& m, const BimodulePtr<K>& n_coeff, std::size_t nmax) {
  MoritaComparison<K> mc(m, n_coeff, nmax);
  return mc.check();
}

}  // namespace bimod
