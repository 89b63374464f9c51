#include <gtest/gtest.h>

#include "bimod/catalog.hpp"
#include "bimod/diagnostics.hpp"
#include "bimod/homology.hpp"
#include "classical_oracle.hpp"
#include "support.hpp"

using namespace bimod;
using V = std::vector<std::size_t>;

namespace {

const Rationals Q;

BimodulePtr<Rationals> reg(const BimodulePtr<Rationals>& m) { return regular_bimodule(m->left()); }

}  // namespace

TEST(Oracle, SelfConsistent) {
  for (const auto& t : {oracle::product_table(2), oracle::truncated_table(2), oracle::upper_triangular_table()})
    for (std::size_t n = 0; n < 2; ++n) EXPECT_TRUE(oracle::squares_to_zero(t, n));
}

TEST(Oracle, FrozenValues) {
  EXPECT_EQ(oracle::hochschild_dims(oracle::product_table(2), 2), (V{2, 0, 0}));
  EXPECT_EQ(oracle::hochschild_dims(oracle::truncated_table(2), 2), (V{2, 1, 1}));
  EXPECT_EQ(oracle::hochschild_dims(oracle::upper_triangular_table(), 2), (V{1, 0, 0}));
}

TEST(MHochschild, MatchesClassicalOracle) {
  struct Case {
    BimodulePtr<Rationals> m;
    oracle::Table table;
  };
  for (const auto& c : {Case{fx::fx2(Q), oracle::product_table(2)}, Case{fx::fx3(Q), oracle::truncated_table(2)},
                        Case{fx::fx4(Q), oracle::upper_triangular_table()}, Case{fx::over_k(catalog::truncated_polynomial(Q, 3)), oracle::truncated_table(3)}})
    EXPECT_EQ(m_hochschild(c.m, reg(c.m), 2).dims(), oracle::hochschild_dims(c.table, 2));
}

TEST(MHochschild, GroundField) {
  auto m = fx::fx1(Q);
  EXPECT_EQ(m_hochschild(m, m, 3).dims(), (V{1, 0, 0, 0}));
}

TEST(MHochschild, Truncated) { EXPECT_EQ(m_hochschild(fx::fx3(Q), reg(fx::fx3(Q)), 2).dims(), (V{2, 1, 1})); }

TEST(MHochschild, ColumnsAreSeparable) { EXPECT_EQ(m_hochschild(fx::fx5(Q), reg(fx::fx5(Q)), 2).dims(), (V{1, 0, 0})); }

TEST(MHochschild, TruncatedOverF2) {
  PrimeField f2(2);
  auto m = fx::fx3(f2);
  EXPECT_EQ(m_hochschild(m, regular_bimodule(m->left()), 2).dims(), (V{2, 2, 2}));
}

TEST(MHochschild, DegreeZeroIsInvariants) {
  for (const auto& m : {fx::fx2(Q), fx::fx3(Q), fx::fx4(Q), fx::fx5(Q), fx::fx6(Q)}) {
    BarResolution<Rationals> r(m);
    for (const auto& [name, n] : probe_set(m)) EXPECT_EQ(m_hochschild(r, n, 0).dims()[0], invariants(n).dim()) << name;
  }
}

TEST(MHochschild, RepresentativesAreCocycles) {
  auto m = fx::fx3(Q);
  BarResolution<Rationals> r(m);
  auto res = m_hochschild(r, reg(m), 2);
  for (std::size_t n = 0; n <= 2; ++n) {
    ASSERT_EQ(res.degrees[n].representatives.size(), res.degrees[n].dim);
    for (const auto& f : res.degrees[n].representatives) EXPECT_TRUE((f * r.differential(n + 1)).is_zero());
    EXPECT_EQ(res.degrees[n].dim, res.degrees[n].cocycle_dim - res.degrees[n].coboundary_dim);
  }
}

TEST(MHochschild, NonGeneratorRejected) {
  EXPECT_THROW(m_hochschild(fx::k_over_fx3(Q), reg(fx::k_over_fx3(Q)), 1), PreconditionError);
}

TEST(Comonad, RegularIsIdentityLike) {
  auto b = catalog::upper_triangular(Q, 2);
  auto c = comonad_apply(regular_bimodule(b), regular_bimodule(b));
  EXPECT_EQ(c.tensor.module->dim(), 3u);
  EXPECT_TRUE(is_isomorphism(c.counit));
}

TEST(Comonad, ColumnsAndTruncated) {
  auto c5 = comonad_apply(fx::fx5(Q), reg(fx::fx5(Q)));
  EXPECT_EQ(c5.tensor.module->dim(), 4u);
  EXPECT_TRUE(is_isomorphism(c5.counit));
  auto c3 = comonad_apply(fx::fx3(Q), reg(fx::fx3(Q)));
  EXPECT_EQ(c3.tensor.module->dim(), 4u);
  EXPECT_TRUE(validate_map(c3.counit).ok);
  EXPECT_EQ(rank(c3.counit.matrix), 2u);
}

TEST(Bar, GroundFieldIsExactAlternating) {
  auto c = bar_resolution(fx::fx1(Q), 4);
  for (std::size_t n = 0; n < 4; ++n) {
    EXPECT_EQ(c.objects[n]->dim(), 1u);
    auto expected = n % 2 == 0 ? Matrix<Rationals>::identity(Q, 1) : Matrix<Rationals>(Q, 1, 1);
    EXPECT_EQ(c.differentials[n], expected) << n;
  }
  EXPECT_TRUE(complex_is_valid(c));
}

TEST(Bar, TruncatedDims) {
  auto c = bar_resolution(fx::fx3(Q), 3);
  EXPECT_EQ(c.objects[0]->dim(), 4u);
  EXPECT_EQ(c.objects[1]->dim(), 8u);
  EXPECT_EQ(c.objects[2]->dim(), 16u);
  EXPECT_TRUE(complex_is_valid(c));
}

TEST(Bar, ColumnsDims) {
  auto c = bar_resolution(fx::fx5(Q), 3);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(c.objects[n]->dim(), 4u);
  EXPECT_TRUE(complex_is_valid(c));
}

TEST(Bar, Recursion) {
  for (const auto& m : {fx::fx2(Q), fx::fx3(Q), fx::fx6(Q)}) {
    BarResolution<Rationals> r(m);
    for (std::size_t n = 1; n < 3; ++n)
      EXPECT_EQ(r.differential(n), r.stage(n).counit.matrix - r.fmap(r.differential(n - 1), n - 1)) << n;
  }
}

TEST(Bar, NonGeneratorRejected) { EXPECT_THROW(bar_resolution(fx::k_over_fx3(Q), 2), PreconditionError); }

TEST(Bar, ZeroDepthRejected) { EXPECT_THROW(bar_resolution(fx::fx2(Q), 0), PreconditionError); }

TEST(Homotopy, Fixtures) {
  EXPECT_TRUE(homotopy_check(fx::fx1(Q), 3).ok);
  auto h3 = homotopy_check(fx::fx3(Q), 2);
  EXPECT_TRUE(h3.ok);
  EXPECT_EQ(h3.identities.size(), 3u);
  EXPECT_TRUE(homotopy_check(fx::fx5(Q), 2).ok);
  EXPECT_TRUE(homotopy_check(fx::fx6(Q), 2).ok);
}

TEST(Syzygy, Values) {
  EXPECT_EQ(syzygy(fx::fx5(Q), 1).module->dim(), 0u);
  EXPECT_EQ(syzygy(fx::fx3(Q), 1).module->dim(), 2u);
  for (const auto& m : {fx::fx2(Q), fx::fx4(Q)}) {
    auto s = syzygy(m, 0);
    EXPECT_EQ(s.module->dim(), m->left()->dim());
  }
  EXPECT_EQ(syzygy(fx::fx4(Q), 1).module->dim(), 6u);
}

TEST(Relative, IdentityMapCollapses) {
  auto b = catalog::upper_triangular(Q, 2);
  auto w = regular_bimodule(b);
  EXPECT_EQ(rel_hochschild(identity_map(b), w, 2).dims(), (V{invariants(w).dim(), 0, 0}));
}

TEST(Relative, OverGroundFieldIsClassical) {
  EXPECT_EQ(rel_hochschild(unit_map(catalog::truncated_polynomial(Q, 2)), regular_bimodule(catalog::truncated_polynomial(Q, 2)), 2).dims(),
            oracle::hochschild_dims(oracle::truncated_table(2), 2));
  EXPECT_EQ(rel_hochschild(unit_map(catalog::upper_triangular(Q, 2)), regular_bimodule(catalog::upper_triangular(Q, 2)), 2).dims(),
            oracle::hochschild_dims(oracle::upper_triangular_table(), 2));
}

TEST(Relative, MatricesOverDiagonal) {
  auto f = fx::fx6_map(Q);
  EXPECT_EQ(rel_hochschild(f, regular_bimodule(f.target), 2).dims(), (V{1, 0, 0}));
}

TEST(Relative, CoboundarySquaresToZero) {
  for (const auto& f : {unit_map(catalog::truncated_polynomial(Q, 2)), fx::fx6_map(Q), unit_map(catalog::upper_triangular(Q, 2))}) {
    auto rc = relative_complex(f, regular_bimodule(f.target), 2);
    for (std::size_t n = 0; n + 1 < rc.coboundaries.size(); ++n)
      EXPECT_TRUE((rc.coboundaries[n + 1] * rc.coboundaries[n]).is_zero()) << n;
  }
}

TEST(Relative, CapNamesTensorPower) {
  ScopedDimensionCap cap(20);
  try {
    rel_hochschild(unit_map(catalog::truncated_polynomial(Q, 2)), regular_bimodule(catalog::truncated_polynomial(Q, 2)), 4);
    FAIL() << "expected a resource error";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("S^(x)"), std::string::npos) << e.what();
  }
}

TEST(Phi, Columns) {
  auto m = fx::fx5(Q);
  auto p = phi_check(m, reg(m), 2);
  EXPECT_TRUE(p.ok);
  EXPECT_EQ(p.source_dims, p.target_dims);
}

TEST(Phi, RegularIsIdentityMorita) {
  auto b = catalog::truncated_polynomial(Q, 2);
  EXPECT_TRUE(phi_check(regular_bimodule(b), regular_bimodule(b), 2).ok);
}

TEST(Phi, MatricesOverDiagonal) {
  auto m = fx::fx6(Q);
  EXPECT_TRUE(phi_check(m, reg(m), 2).ok);
}

TEST(Phi, TruncatedOverGroundField) {
  auto m = fx::fx3(Q);
  auto p = phi_check(m, reg(m), 2);
  EXPECT_TRUE(p.ok);
  for (bool b : p.isomorphisms) EXPECT_TRUE(b);
  for (bool b : p.squares) EXPECT_TRUE(b);
}

TEST(Phi, NonProgeneratorRejected) {
  EXPECT_THROW(phi_check(fx::k_over_fx3(Q), reg(fx::k_over_fx3(Q)), 1), PreconditionError);
}
