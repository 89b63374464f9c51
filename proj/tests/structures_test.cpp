#include <gtest/gtest.h>

#include "bimod/algebra.hpp"
#include "bimod/bimodule.hpp"
#include "bimod/catalog.hpp"
#include "support.hpp"

using namespace bimod;
using fx::mat;

namespace {

const Rationals Q;

AlgebraPtr<Rationals> corrupted_truncated() {
  // 1*x := 0 breaks the unit axiom and hence the (1, x) pair
  auto t = catalog::empty_table(Q, 2);
  t[0][0] = {Q.one(), Q.zero()};
  t[1][0] = {Q.zero(), Q.one()};
  t[1][1] = {Q.one(), Q.zero()};
  return std::make_shared<Algebra<Rationals>>(Q, 2, t, std::vector<mpq_class>{Q.one(), Q.zero()},
                                              std::vector<std::string>{"1", "x"});
}

}  // namespace

TEST(ValidateAlgebra, CatalogAlgebrasPass) {
  for (auto a : {ground_algebra(Q), catalog::product_algebra(Q, 2), catalog::truncated_polynomial(Q, 2),
                 catalog::truncated_polynomial(Q, 4), catalog::upper_triangular(Q, 2), catalog::upper_triangular(Q, 3),
                 catalog::matrix_algebra(Q, 2), catalog::matrix_algebra(Q, 3)})
    EXPECT_TRUE(validate_algebra(*a).ok) << validate_algebra(*a).message;
}

TEST(ValidateAlgebra, TruncatedPolynomialTable) {
  auto b = catalog::truncated_polynomial(Q, 2);
  EXPECT_EQ(b->product(0, 0), fx::col(Q, {1, 0}));
  EXPECT_EQ(b->product(0, 1), fx::col(Q, {0, 1}));
  EXPECT_EQ(b->product(1, 0), fx::col(Q, {0, 1}));
  EXPECT_TRUE(b->product(1, 1).is_zero());
}

TEST(ValidateAlgebra, CorruptedTableIsRejected) {
  auto v = validate_algebra(*corrupted_truncated());
  EXPECT_FALSE(v.ok);
  EXPECT_FALSE(v.message.empty());
}

TEST(ValidateAlgebra, NonAssociativeNamesTriple) {
  auto t = catalog::empty_table(Q, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    t[0][i][i] = Q.one();
    t[i][0][i] = Q.one();
  }
  t[1][1][2] = Q.one();  // x x = y
  t[2][1][1] = Q.one();  // y x = x, while x y = 0
  Algebra<Rationals> a(Q, 3, t, {Q.one(), Q.zero(), Q.zero()}, {"1", "x", "y"});
  auto v = validate_algebra(a);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.message.find("(x, x, x)"), std::string::npos) << v.message;
}

TEST(ValidateAlgebra, ZeroRingRejected) {
  EXPECT_THROW(Algebra<Rationals>(Q, 0, {}, {}), ValidationError);
}

TEST(RingMaps, IdentityOnTruncated) {
  EXPECT_TRUE(validate_ring_map(identity_map(catalog::truncated_polynomial(Q, 2))).ok);
}

TEST(RingMaps, UnitMapOnUpperTriangular) {
  EXPECT_TRUE(validate_ring_map(unit_map(catalog::upper_triangular(Q, 2))).ok);
}

TEST(RingMaps, ProjectionToFirstFactor) {
  auto f = RingMap<Rationals>{catalog::product_algebra(Q, 2), ground_algebra(Q), mat(Q, {{1, 0}})};
  EXPECT_TRUE(validate_ring_map(f).ok);
}

TEST(RingMaps, NonMultiplicativeMapRejected) {
  // e1, e2 -> 1 is additive and unital-breaking
  auto f = RingMap<Rationals>{catalog::product_algebra(Q, 2), ground_algebra(Q), mat(Q, {{1, 1}})};
  EXPECT_FALSE(validate_ring_map(f).ok);
  auto g = RingMap<Rationals>{ground_algebra(Q), catalog::truncated_polynomial(Q, 2), mat(Q, {{1}, {1}})};
  EXPECT_FALSE(validate_ring_map(g).ok);
}

TEST(RingMaps, CompositionOfValidMapsIsValid) {
  auto b = catalog::matrix_algebra(Q, 2);
  auto diag = catalog::diagonal_embedding(catalog::product_algebra(Q, 2), b, 2);
  auto k_to_diag = unit_map(catalog::product_algebra(Q, 2));
  auto c = compose(diag, k_to_diag);
  EXPECT_TRUE(validate_ring_map(c).ok);
  EXPECT_EQ(c.matrix, unit_map(b).matrix);
  EXPECT_TRUE(validate_ring_map(compose(identity_map(b), diag)).ok);
}

TEST(Multiplication, IdentityOnGroundField) {
  auto m = multiplication_map(identity_map(ground_algebra(Q)));
  EXPECT_EQ(m.tensor.module->dim(), 1u);
  EXPECT_EQ(m.map.matrix, (Matrix<Rationals>::identity(Q, 1)));
}

TEST(Multiplication, TruncatedOverGroundField) {
  auto m = multiplication_map(unit_map(catalog::truncated_polynomial(Q, 2)));
  EXPECT_EQ(m.map.source->dim(), 4u);
  EXPECT_EQ(m.map.target->dim(), 2u);
  EXPECT_TRUE(is_surjective(m.map));
  EXPECT_EQ(kernel_basis(m.map.matrix).dim(), 2u);
  EXPECT_TRUE(validate_map(m.map).ok);
}

TEST(Multiplication, MatricesOverDiagonal) {
  auto m = multiplication_map(fx::fx6_map(Q));
  EXPECT_EQ(m.map.source->dim(), 8u);
  EXPECT_EQ(kernel_basis(m.map.matrix).dim(), 4u);
  EXPECT_TRUE(is_surjective(m.map));
}

TEST(Multiplication, BimoduleMapAndSurjectiveForEveryCatalogAlgebra) {
  for (auto b : {catalog::product_algebra(Q, 3), catalog::truncated_polynomial(Q, 3), catalog::upper_triangular(Q, 2),
                 catalog::matrix_algebra(Q, 2)}) {
    for (const auto& f : {unit_map(b), identity_map(b)}) {
      auto m = multiplication_map(f);
      EXPECT_TRUE(validate_map(m.map).ok);
      EXPECT_TRUE(is_surjective(m.map));
    }
  }
}

TEST(Fields, AlgebrasOverPrimeFields) {
  PrimeField f2(2);
  EXPECT_TRUE(validate_algebra(*catalog::matrix_algebra(f2, 2)).ok);
  auto m = multiplication_map(unit_map(catalog::truncated_polynomial(f2, 2)));
  EXPECT_EQ(kernel_basis(m.map.matrix).dim(), 2u);
}
