#include <gtest/gtest.h>

#include "bimod/catalog.hpp"
#include "bimod/diagnostics.hpp"
#include "support.hpp"

using namespace bimod;
using V = std::vector<std::size_t>;

namespace {

const Rationals Q;

BimodulePtr<Rationals> reg(const BimodulePtr<Rationals>& m) { return regular_bimodule(m->left()); }

bool casimir_rechecks(const BimodulePtr<Rationals>& m, const SeparabilityVerdict<Rationals>& v) {
  const auto& ev = v.evaluation;
  if (v.value()) return recheck_casimir(ev.tensor.module, ev.counit.matrix, m->left()->unit(), *v.casimir.casimir);
  return recheck_obstruction(ev.tensor.module, ev.counit.matrix, m->left()->unit(), *v.casimir.obstruction);
}

bool section_rechecks(const BimoduleMap<Rationals>& eps, const SectionVerdict<Rationals>& s) {
  if (s.value) return recheck_section(eps, *s.section);
  // y C = 0 and y vec(id) = 1 over the bimodule maps P -> F(P)
  auto h = hom_bimodule(eps.target, eps.source);
  auto id = Matrix<Rationals>::identity(Q, eps.target->dim()).vec();
  for (const auto& g : h.basis)
    if (!(*s.obstruction * (eps.matrix * g).vec()).is_zero()) return false;
  return (*s.obstruction * id)(0, 0) == Q.one();
}

std::vector<BimodulePtr<Rationals>> generators() { return {fx::fx2(Q), fx::fx3(Q), fx::fx4(Q), fx::fx5(Q), fx::fx6(Q)}; }

}  // namespace

TEST(Separable, ProductOfFields) {
  auto m = fx::fx2(Q);
  auto v = is_separable_bimodule(m);
  ASSERT_TRUE(v.value());
  EXPECT_TRUE(casimir_rechecks(m, v));
  // s = e1 (x) e1* + e2 (x) e2*: in plain coordinates m (x) f, evaluating gives (m)f = 1
  auto plain = v.evaluation.tensor.section() * *v.casimir.casimir;
  EXPECT_EQ(rank(Matrix<Rationals>::unvec(plain, m->dim(), v.evaluation.hom.dim())), 2u);
}

TEST(Separable, TruncatedIsNot) {
  auto m = fx::fx3(Q);
  auto v = is_separable_bimodule(m);
  EXPECT_FALSE(v.value());
  EXPECT_EQ(v.casimir.centralizer_dim, 2u);
  EXPECT_TRUE(casimir_rechecks(m, v));
}

TEST(Separable, Columns) {
  auto m = fx::fx5(Q);
  auto v = is_separable_bimodule(m);
  ASSERT_TRUE(v.value());
  EXPECT_EQ(v.evaluation.counit.matrix * *v.casimir.casimir, m->left()->unit());
  EXPECT_TRUE(casimir_rechecks(m, v));
}

TEST(Separable, WitnessesRecheckEverywhere) {
  for (const auto& m : generators()) EXPECT_TRUE(casimir_rechecks(m, is_separable_bimodule(m)));
  EXPECT_TRUE(casimir_rechecks(fx::k_over_fx3(Q), is_separable_bimodule(fx::k_over_fx3(Q))));
}

TEST(RelProjective, FreeObjectsAreProjective) {
  for (const auto& m : generators()) {
    auto free = evaluation_map(m).tensor.module;
    auto v = is_rel_projective(free, m);
    EXPECT_TRUE(v.value());
    EXPECT_TRUE(section_rechecks(v.cover.counit, v.section));
  }
}

TEST(RelProjective, RegularBimodule) {
  auto v3 = is_rel_projective(reg(fx::fx3(Q)), fx::fx3(Q));
  EXPECT_FALSE(v3.value());
  EXPECT_TRUE(section_rechecks(v3.cover.counit, v3.section));
  auto v2 = is_rel_projective(reg(fx::fx2(Q)), fx::fx2(Q));
  EXPECT_TRUE(v2.value());
  EXPECT_TRUE(section_rechecks(v2.cover.counit, v2.section));
}

TEST(RelProjective, RegularAgreesWithSeparability) {
  for (const auto& m : generators()) EXPECT_EQ(is_rel_projective(reg(m), m).value(), is_separable_bimodule(m).value());
}

TEST(Smooth, Columns) {
  auto v = is_formally_smooth_bimodule(fx::fx5(Q));
  EXPECT_TRUE(v.value);
  EXPECT_EQ(v.via, "ev_injective");
}

TEST(Smooth, UpperTriangular) {
  auto v = is_formally_smooth_bimodule(fx::fx4(Q));
  EXPECT_TRUE(v.value);
  EXPECT_EQ(v.via, "section");
  EXPECT_EQ(v.kernel_dim, 6u);
  ASSERT_TRUE(v.projectivity);
  EXPECT_TRUE(section_rechecks(v.projectivity->cover.counit, v.projectivity->section));
}

TEST(Smooth, Truncated) {
  auto v = is_formally_smooth_bimodule(fx::fx3(Q));
  EXPECT_FALSE(v.value);
  ASSERT_TRUE(v.projectivity);
  EXPECT_TRUE(section_rechecks(v.projectivity->cover.counit, v.projectivity->section));
}

TEST(Smooth, SeparableShortCircuit) {
  auto v = is_formally_smooth_bimodule(fx::fx2(Q));
  EXPECT_TRUE(v.value);
  EXPECT_EQ(v.via, "separable");
}

TEST(SeparableExtension, Identity) {
  auto b = catalog::truncated_polynomial(Q, 2);
  auto v = is_separable_extension(identity_map(b));
  ASSERT_TRUE(v.value());
  // 1 (x) 1 is the only candidate once B (x)_B B = B
  EXPECT_EQ(v.multiplication.tensor.module->dim(), 2u);
  EXPECT_EQ(v.multiplication.map.matrix * *v.casimir.casimir, b->unit());
}

TEST(SeparableExtension, MatricesOverDiagonal) {
  auto f = fx::fx6_map(Q);
  auto v = is_separable_extension(f);
  ASSERT_TRUE(v.value());
  EXPECT_TRUE(recheck_casimir(v.multiplication.tensor.module, v.multiplication.map.matrix, f.target->unit(), *v.casimir.casimir));
  // e11 (x) e11 + e21 (x) e12 is a separability idempotent
  auto plain = Matrix<Rationals>(Q, 16, 1);
  plain[0 * 4 + 0] = Q.one();
  plain[2 * 4 + 1] = Q.one();
  auto e = v.multiplication.tensor.projection() * plain;
  EXPECT_TRUE(recheck_casimir(v.multiplication.tensor.module, v.multiplication.map.matrix, f.target->unit(), e));
}

TEST(SeparableExtension, TruncatedOverGroundField) {
  auto f = unit_map(catalog::truncated_polynomial(Q, 2));
  auto v = is_separable_extension(f);
  EXPECT_FALSE(v.value());
  EXPECT_TRUE(recheck_obstruction(v.multiplication.tensor.module, v.multiplication.map.matrix, f.target->unit(), *v.casimir.obstruction));
}

TEST(SmoothExtension, Verdicts) {
  auto s4 = is_formally_smooth_extension(unit_map(catalog::upper_triangular(Q, 2)));
  EXPECT_TRUE(s4.value());
  EXPECT_TRUE(recheck_section(s4.counit, *s4.section.section));
  EXPECT_FALSE(is_formally_smooth_extension(unit_map(catalog::truncated_polynomial(Q, 2))).value());
  EXPECT_TRUE(is_formally_smooth_extension(unit_map(catalog::product_algebra(Q, 2))).value());
}

TEST(SmoothExtension, AgreesWithBimoduleOverGroundField) {
  for (auto b : {catalog::product_algebra(Q, 2), catalog::truncated_polynomial(Q, 2), catalog::upper_triangular(Q, 2)})
    EXPECT_EQ(is_formally_smooth_bimodule(fx::over_k(b)).value, is_formally_smooth_extension(unit_map(b)).value());
}

TEST(Hdim, Grid) {
  EXPECT_EQ(hdim_upto(fx::fx2(Q), 3).str(), "0");
  EXPECT_EQ(hdim_upto(fx::fx4(Q), 3).str(), "1");
  auto h3 = hdim_upto(fx::fx3(Q), 3);
  EXPECT_EQ(h3.str(), "> 3");
  EXPECT_FALSE(h3.value);
  EXPECT_TRUE(h3.inferred);
  EXPECT_EQ(h3.syzygy_dims.size(), 4u);
}

TEST(Hdim, ZeroIffSeparableAndOneIffSmooth) {
  for (const auto& m : generators()) {
    auto h = hdim_upto(m, 2);
    EXPECT_EQ(h.value && *h.value == 0, is_separable_bimodule(m).value());
    EXPECT_EQ(h.value && *h.value <= 1, is_formally_smooth_bimodule(m).value);
  }
}

TEST(Hdim, NonGeneratorRejected) { EXPECT_THROW(hdim_upto(fx::k_over_fx3(Q), 2), PreconditionError); }

TEST(ProbeSet, CohomologyMatchesVerdicts) {
  for (const auto& m : generators()) {
    BarResolution<Rationals> r(m);
    bool h1 = true, h2 = true;
    for (const auto& [name, n] : probe_set(m)) {
      auto dims = m_hochschild(r, n, 2).dims();
      h1 = h1 && dims[1] == 0;
      h2 = h2 && dims[2] == 0;
    }
    EXPECT_EQ(h1, is_separable_bimodule(m).value());
    EXPECT_EQ(h2, is_formally_smooth_bimodule(m).value);
  }
}

TEST(Morita, Columns) {
  auto m = fx::fx5(Q);
  auto r = morita_check(m, reg(m), 2);
  EXPECT_EQ(r.m_dims, (V{1, 0, 0}));
  EXPECT_EQ(r.rel_dims, (V{1, 0, 0}));
  EXPECT_TRUE(r.equal);
  EXPECT_TRUE(r.phi.ok);
}

TEST(Morita, IdentityContext) {
  auto b = catalog::truncated_polynomial(Q, 2);
  auto m = regular_bimodule(b);
  auto r = morita_check(m, m, 2);
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.m_dims, (V{2, 0, 0}));
}

TEST(Morita, TruncatedOverGroundField) {
  auto m = fx::fx3(Q);
  auto r = morita_check(m, reg(m), 2);
  EXPECT_EQ(r.m_dims, (V{2, 1, 1}));
  EXPECT_EQ(r.rel_dims, (V{2, 1, 1}));
}

TEST(Morita, ProbeSetOnProgenerators) {
  for (const auto& m : {fx::fx5(Q), fx::fx6(Q)})
    for (const auto& [name, n] : probe_set(m)) {
      if (name == "F(B)") continue;
      auto r = morita_check(m, n, 2);
      EXPECT_TRUE(r.equal) << name;
      EXPECT_TRUE(r.phi.ok) << name;
    }
}

TEST(Morita, NonProgeneratorRejected) {
  EXPECT_THROW(morita_check(fx::k_over_fx3(Q), reg(fx::k_over_fx3(Q)), 1), PreconditionError);
}

TEST(Sugano, Columns) {
  auto r = sugano_check(fx::fx5(Q));
  EXPECT_TRUE(r.precondition);
  EXPECT_TRUE(r.separable);
  EXPECT_TRUE(r.generator && r.extension_separable);
  EXPECT_TRUE(r.consistent);
}

TEST(Sugano, RegularOverItself) {
  auto r = sugano_check(regular_bimodule(catalog::truncated_polynomial(Q, 2)));
  EXPECT_TRUE(r.separable);
  EXPECT_TRUE(r.generator);
  EXPECT_TRUE(r.extension_separable);
  EXPECT_TRUE(r.consistent);
}

TEST(Sugano, NonGeneratorOverEndomorphisms) {
  auto m = fx::k_over_fx3(Q);
  EXPECT_FALSE(is_separable_bimodule(endomorphism_ring(m).module).value());
  auto r = sugano_check(m);
  EXPECT_FALSE(r.precondition);
  EXPECT_TRUE(r.consistent);
}

TEST(Sugano, ConsistentOnFixtures) {
  for (const auto& m : generators()) EXPECT_TRUE(sugano_check(m).consistent);
}

TEST(Static, Columns) {
  auto r = static_criteria(fx::fx5(Q));
  EXPECT_TRUE(r.generator);
  EXPECT_TRUE(r.ev_over_s_isomorphism);
  EXPECT_TRUE(r.bs_separable);
  EXPECT_TRUE(r.consistent);
}

TEST(Static, TrivialModuleOverTruncated) {
  auto r = static_criteria(fx::k_over_fx3(Q));
  EXPECT_TRUE(r.ev_over_s_injective);
  EXPECT_TRUE(r.trace_static);
  EXPECT_EQ(r.trace_dim, 1u);
  EXPECT_FALSE(r.generator);
  EXPECT_FALSE(r.bs_separable);
  EXPECT_TRUE(r.consistent);
}

TEST(Static, RegularModule) {
  auto r = static_criteria(regular_bimodule(catalog::upper_triangular(Q, 2)));
  EXPECT_TRUE(r.ev_over_s_injective && r.trace_static && r.generator && r.bs_separable);
}

TEST(Product, IdentityFactor) {
  auto b = catalog::upper_triangular(Q, 2);
  auto x = regular_bimodule(b);
  auto y = fx::over_k(b);
  auto r = smooth_product(x, y, 2);
  EXPECT_EQ(r.product->dim(), 3u);
  EXPECT_TRUE(r.hypotheses_hold);
  EXPECT_TRUE(r.smooth);
  EXPECT_TRUE(r.consistent);
}

TEST(Product, ColumnsTimesGroundField) {
  auto r = smooth_product(fx::fx5(Q), regular_bimodule(ground_algebra(Q)), 1);
  EXPECT_TRUE(r.hypotheses_hold);
  EXPECT_EQ(r.product->dim(), 2u);
  EXPECT_TRUE(r.smooth);
}

TEST(Product, FailedClauseIsReported) {
  auto r = smooth_product(fx::fx3(Q), regular_bimodule(ground_algebra(Q)), 1);
  EXPECT_FALSE(r.hypotheses_hold);
  bool named = false;
  for (const auto& [clause, ok] : r.hypotheses) named = named || (!ok && clause == "ev_X injective");
  EXPECT_TRUE(named);
  EXPECT_FALSE(r.smooth);
  EXPECT_TRUE(r.consistent);
}

TEST(Product, BadModeRejected) { EXPECT_THROW(smooth_product(fx::fx5(Q), fx::fx1(Q), 3), PreconditionError); }

TEST(Properties, SmoothBimoduleAndSmoothExtension) {
  for (const auto& m : generators()) {
    ASSERT_TRUE(is_fg_projective_left(m).value);
    auto e = endomorphism_ring(m);
    bool bimodule = is_formally_smooth_bimodule(m).value;
    bool extension = is_formally_smooth_extension(e.canonical).value();
    if (bimodule) { EXPECT_TRUE(extension); }
    if (is_generator(m).value && extension) { EXPECT_TRUE(bimodule); }
  }
}

TEST(Properties, KernelOfEndomorphismMultiplication) {
  for (const auto& m : generators()) {
    auto e = endomorphism_ring(m);
    auto ms = multiplication_map(e.canonical);
    auto ker_ms = ms.map.source->dim() - rank(ms.map.matrix);
    auto ker_ev = kernel_submodule(evaluation_map(m).counit).module;
    auto left = tensor_over(dual_module(m).module, ker_ev);
    EXPECT_EQ(tensor_over(left.module, m).module->dim(), ker_ms);
  }
}

TEST(Properties, ImplicationsOverF3) {
  PrimeField f3(3);
  for (const auto& m : {fx::fx2(f3), fx::fx3(f3), fx::fx4(f3), fx::fx5(f3)}) {
    bool sep = is_separable_bimodule(m).value();
    auto sm = is_formally_smooth_bimodule(m);
    if (sep) { EXPECT_TRUE(sm.value); }
    if (sm.kernel_dim == 0) { EXPECT_TRUE(sm.value); }
    auto h = hdim_upto(m, 2);
    EXPECT_EQ(sep, h.value && *h.value == 0);
    EXPECT_EQ(sm.value, h.value && *h.value <= 1);
  }
}
