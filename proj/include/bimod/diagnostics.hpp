#pragma once

// Decision procedures with witnesses: separability (bimodule and ring
// extension), relative projectivity, formal smoothness, Hochschild
// dimension bounds, and the cross-checks relating M-relative data to the
// endomorphism ring.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bimod/algebra.hpp"
#include "bimod/bimodule.hpp"
#include "bimod/error.hpp"
#include "bimod/exactlin.hpp"
#include "bimod/homology.hpp"
#include "bimod/matrix.hpp"

namespace bimod {

// -------------------------------------------------------------- Casimir elements

/// An invariant s in a B-B bimodule C with map(s) = target.
template <class K>
struct CasimirVerdict {
  bool value = false;
  std::size_t ambient_dim = 0;
  std::size_t centralizer_dim = 0;
  std::optional<Matrix<K>> casimir;      // coordinates in C
  std::optional<Matrix<K>> obstruction;  // row y with y map z = 0 on invariants z and y target = 1
};

template <class K>
CasimirVerdict<K> casimir_solve(const BimodulePtr<K>& c, const Matrix<K>& map, const Matrix<K>& target) {
  CasimirVerdict<K> v;
  v.ambient_dim = c->dim();
  auto inv = invariants(c);
  v.centralizer_dim = inv.dim();
  auto z = inv.columns();
  auto cons = map * z;
  if (auto sol = solve_affine(cons, target)) {
    v.value = true;
    v.casimir = z * sol->particular;
  } else {
    v.obstruction = infeasibility_certificate(cons, target);
  }
  return v;
}

/// b s = s b for every basis b, and map(s) = target.
template <class K>
bool recheck_casimir(const BimodulePtr<K>& c, const Matrix<K>& map, const Matrix<K>& target, const Matrix<K>& s) {
  for (std::size_t i = 0; i < c->left()->dim(); ++i)
    if (c->left_action(i) * s != c->right_action(i) * s) return false;
  return map * s == target;
}

/// y kills map on the invariants and pairs to 1 with the target.
template <class K>
bool recheck_obstruction(const BimodulePtr<K>& c, const Matrix<K>& map, const Matrix<K>& target, const Matrix<K>& y) {
  auto z = invariants(c).columns();
  return (y * map * z).is_zero() && (y * target)(0, 0) == c->field().one();
}

template <class K>
struct SeparabilityVerdict {
  Comonad<K> evaluation;
  CasimirVerdict<K> casimir;
  bool value() const { return casimir.value; }
};

/// ev_M : M (x)_A *M -> B splits as a map of B-bimodules.
template <class K>
SeparabilityVerdict<K> is_separable_bimodule(const BimodulePtr<K>& m) {
  SeparabilityVerdict<K> v{evaluation_map(m), {}};
  v.casimir = casimir_solve(v.evaluation.tensor.module, v.evaluation.counit.matrix, m->left()->unit());
  return v;
}

template <class K>
struct ExtensionSeparability {
  Multiplication<K> multiplication;
  CasimirVerdict<K> casimir;
  bool value() const { return casimir.value; }
};

/// m_S : S (x)_A S -> S splits as a map of S-bimodules.
template <class K>
ExtensionSeparability<K> is_separable_extension(const RingMap<K>& f) {
  ExtensionSeparability<K> v{multiplication_map(f), {}};
  v.casimir = casimir_solve(v.multiplication.tensor.module, v.multiplication.map.matrix, f.target->unit());
  return v;
}

// -------------------------------------------------------------- sections

template <class K>
struct SectionVerdict {
  bool value = false;
  std::size_t source_dim = 0;  // the object being split
  std::size_t cover_dim = 0;
  std::optional<Matrix<K>> section;
  std::optional<Matrix<K>> obstruction;  // row y: y C = 0, y vec(id) = 1
};

/// A bimodule map sigma with eps sigma = id, for eps : X -> P.
template <class K>
SectionVerdict<K> find_section(const BimoduleMap<K>& eps) {
  const auto& k = eps.source->field();
  const auto p = eps.target->dim();
  SectionVerdict<K> v;
  v.source_dim = p;
  v.cover_dim = eps.source->dim();
  auto h = hom_bimodule(eps.target, eps.source);
  Matrix<K> cons(k, p * p, h.dim());
  for (std::size_t j = 0; j < h.dim(); ++j) cons.set_col(j, (eps.matrix * h.basis[j]).vec());
  auto rhs = Matrix<K>::identity(k, p).vec();
  if (auto sol = solve_affine(cons, rhs)) {
    v.value = true;
    v.section = h.realize(sol->particular);
  } else {
    v.obstruction = infeasibility_certificate(cons, rhs);
  }
  return v;
}

template <class K>
bool recheck_section(const BimoduleMap<K>& eps, const Matrix<K>& sigma) {
  if (eps.matrix * sigma != Matrix<K>::identity(eps.source->field(), eps.target->dim())) return false;
  return validate_map(BimoduleMap<K>{eps.target, eps.source, sigma}).ok;
}

template <class K>
struct RelProjectivity {
  Comonad<K> cover;  // F(P) -> P
  SectionVerdict<K> section;
  bool value() const { return section.value; }
};

/// P is projective relative to the maps split by Hom_B(M, -): the counit
/// F(P) -> P has a bimodule section.
template <class K>
RelProjectivity<K> is_rel_projective(const BimodulePtr<K>& p, const BimodulePtr<K>& m) {
  RelProjectivity<K> v{comonad_apply(m, p, "M (x)_A Hom(M, P)"), {}};
  v.section = find_section(v.cover.counit);
  return v;
}

// -------------------------------------------------------------- smoothness

template <class K>
struct SmoothnessVerdict {
  bool value = false;
  std::string via;  // "ev_injective", "separable" or "section"
  std::size_t kernel_dim = 0;
  std::optional<SeparabilityVerdict<K>> separability;
  std::optional<RelProjectivity<K>> projectivity;
  std::optional<Submodule<K>> kernel;
};

/// Ker(ev_M) is projective relative to Hom_B(M, -)-split maps.
template <class K>
SmoothnessVerdict<K> is_formally_smooth_bimodule(const BimodulePtr<K>& m) {
  SmoothnessVerdict<K> v;
  auto ev = evaluation_map(m);
  auto ker = kernel_submodule(ev.counit);
  v.kernel_dim = ker.module->dim();
  if (v.kernel_dim == 0) {
    v.value = true;
    v.via = "ev_injective";
    v.kernel = std::move(ker);
    return v;
  }
  auto sep = is_separable_bimodule(m);
  if (sep.value()) {
    v.value = true;
    v.via = "separable";
    v.separability = std::move(sep);
    v.kernel = std::move(ker);
    return v;
  }
  v.separability = std::move(sep);
  v.projectivity = is_rel_projective(ker.module, m);
  v.value = v.projectivity->value();
  v.via = "section";
  v.kernel = std::move(ker);
  return v;
}

template <class K>
struct ExtensionSmoothness {
  std::size_t kernel_dim = 0;
  std::size_t cover_dim = 0;
  BimoduleMap<K> counit;
  SectionVerdict<K> section;
  bool value() const { return section.value; }
};

/// Ker(m_B : B (x)_A B -> B) has a section of B (x)_A L (x)_A B -> L.
template <class K>
ExtensionSmoothness<K> is_formally_smooth_extension(const RingMap<K>& f) {
  require_valid(f);
  const auto& k = f.target->field();
  const auto bd = f.target->dim();
  auto mult = multiplication_map(f);
  auto l = kernel_submodule(mult.map).module;
  auto x1 = tensor_over(regular_over(f), restrict_left(l, f), "B (x)_A L");
  auto x = tensor_over(restrict_right(x1.module, f), regular_under(f), "B (x)_A L (x)_A B");
  Matrix<K> p1(k, l->dim(), bd * l->dim());
  for (std::size_t i = 0; i < bd; ++i)
    for (std::size_t y = 0; y < l->dim(); ++y) p1.set_col(i * l->dim() + y, l->left_action(i).col(y));
  if (!descends(p1, x1)) throw Error("left multiplication does not descend");
  auto mu1 = p1 * x1.section();
  Matrix<K> p2(k, l->dim(), x1.module->dim() * bd);
  for (std::size_t y = 0; y < x1.module->dim(); ++y)
    for (std::size_t j = 0; j < bd; ++j) p2.set_col(y * bd + j, l->right_action(j) * mu1.col(y));
  if (!descends(p2, x)) throw Error("right multiplication does not descend");
  ExtensionSmoothness<K> v{l->dim(), x.module->dim(), {x.module, l, p2 * x.section()}, {}};
  v.section = find_section(v.counit);
  return v;
}

// -------------------------------------------------------------- dimension

template <class K>
struct HdimVerdict {
  std::optional<std::size_t> value;  // nullopt: greater than nmax
  std::size_t nmax = 0;
  bool inferred = false;             // relies on the syzygy criterion in degree >= 2
  std::vector<std::size_t> syzygy_dims;
  std::optional<RelProjectivity<K>> projectivity;  // splitting for the projective syzygy

  std::string str() const { return value ? std::to_string(*value) : "> " + std::to_string(nmax); }
};

/// Least n <= nmax such that Omega^n is relatively projective.
template <class K>
HdimVerdict<K> hdim_upto(BarResolution<K>& r, std::size_t nmax) {
  HdimVerdict<K> v;
  v.nmax = nmax;
  for (std::size_t n = 0; n <= nmax; ++n) {
    auto omega = syzygy(r, n);
    v.syzygy_dims.push_back(omega.module->dim());
    auto proj = is_rel_projective(omega.module, r.module());
    if (proj.value()) {
      v.value = n;
      v.projectivity = std::move(proj);
      break;
    }
  }
  v.inferred = v.value ? *v.value >= 2 : nmax >= 2;
  return v;
}

template <class K>
HdimVerdict<K> hdim_upto(const BimodulePtr<K>& m, std::size_t nmax) {
  BarResolution<K> r(m);
  return hdim_upto(r, nmax);
}

// -------------------------------------------------------------- cross-checks

template <class K>
struct MoritaReport {
  std::vector<std::size_t> m_dims;    // H^n_M(B, N)
  std::vector<std::size_t> rel_dims;  // H^n(S|A, *M (x) N (x) M)
  bool equal = false;
  PhiReport phi;
  std::size_t s_dim = 0;
  std::size_t w_dim = 0;
};

template <class K>
MoritaReport<K> morita_check(const BimodulePtr<K>& m, const BimodulePtr<K>& n_coeff, std::size_t nmax) {
  MoritaComparison<K> mc(m, n_coeff, nmax);
  MoritaReport<K> rep;
  rep.m_dims = m_hochschild(m, n_coeff, nmax).dims();
  rep.rel_dims = rel_hochschild(mc.relative()).dims();
  rep.equal = rep.m_dims == rep.rel_dims;
  rep.phi = mc.check();
  rep.s_dim = mc.endomorphisms().algebra->dim();
  rep.w_dim = mc.coefficients()->dim();
  return rep;
}

struct SuganoReport {
  bool precondition = false;  // M finitely generated projective on the left
  bool separable = false;
  bool generator = false;
  bool extension_separable = false;
  bool consistent = false;
};

/// Separable bimodule versus (generator and A -> End(M) separable).
template <class K>
SuganoReport sugano_check(const BimodulePtr<K>& m) {
  SuganoReport r;
  r.precondition = is_fg_projective_left(m).value;
  r.separable = is_separable_bimodule(m).value();
  r.generator = is_generator(m).value;
  r.extension_separable = is_separable_extension(endomorphism_ring(m).canonical).value();
  r.consistent = !r.precondition || r.separable == (r.generator && r.extension_separable);
  return r;
}

struct StaticReport {
  bool ev_over_s_injective = false;
  bool ev_over_s_isomorphism = false;
  bool trace_static = false;
  bool generator = false;
  bool bs_separable = false;
  std::size_t trace_dim = 0;
  bool consistent = false;
};

template <class K>
StaticReport static_criteria(const BimodulePtr<K>& m) {
  StaticReport r;
  auto e = endomorphism_ring(m);
  auto b = regular_bimodule(m->left());
  auto ev = comonad_apply(e.module, b, "M (x)_S *M").counit;
  r.ev_over_s_injective = is_injective(ev);
  r.ev_over_s_isomorphism = is_isomorphism(ev);
  auto tr = submodule(as_left_module(b), trace_in(m, b));
  r.trace_dim = tr.module->dim();
  r.trace_static = is_isomorphism(comonad_apply(e.module, tr.module, "M (x)_S Hom(M, Tr)").counit);
  r.generator = is_generator(m).value;
  r.bs_separable = is_separable_bimodule(e.module).value();
  r.consistent = r.ev_over_s_injective == r.trace_static && r.generator == r.ev_over_s_isomorphism &&
                 r.generator == r.bs_separable;
  return r;
}

template <class K>
struct ProductReport {
  BimodulePtr<K> product;
  std::vector<std::pair<std::string, bool>> hypotheses;
  bool hypotheses_hold = true;
  bool smooth = false;
  bool consistent = true;
};

/// M = X (x)_T Y and whether the hypotheses of mode 1 or 2 force M to be smooth.
template <class K>
ProductReport<K> smooth_product(const BimodulePtr<K>& x, const BimodulePtr<K>& y, int mode) {
  if (mode != 1 && mode != 2) throw PreconditionError("smooth_product: mode must be 1 or 2");
  ProductReport<K> r;
  auto add = [&](std::string name, bool v) {
    r.hypotheses.emplace_back(std::move(name), v);
    r.hypotheses_hold = r.hypotheses_hold && v;
  };
  add("ev_X injective", is_injective(evaluation_map(x).counit));
  add("X projective over T", is_fg_projective_right(x).value);
  if (mode == 1) {
    add("Y separable", is_separable_bimodule(y).value());
  } else {
    add("*X projective over T", is_fg_projective_left(dual_module(x).module).value);
    add("Y projective over T", is_fg_projective_left(y).value);
    add("Y formally smooth", is_formally_smooth_bimodule(y).value);
  }
  r.product = tensor_over(x, y, "X (x)_T Y").module;
  r.smooth = is_formally_smooth_bimodule(r.product).value;
  r.consistent = !r.hypotheses_hold || r.smooth;
  return r;
}

/// {B, Ker(ev_M), F(B)} as B-B bimodules.
template <class K>
std::vector<std::pair<std::string, BimodulePtr<K>>> probe_set(const BimodulePtr<K>& m) {
  auto ev = evaluation_map(m);
  return {{"B", regular_bimodule(m->left())},
          {"ker_ev", kernel_submodule(ev.counit).module},
          {"F(B)", ev.tensor.module}};
}

}  // namespace bimod
