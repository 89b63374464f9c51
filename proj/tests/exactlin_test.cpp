#include <gtest/gtest.h>

#include <random>

#include "bimod/exactlin.hpp"
#include "support.hpp"

using namespace bimod;
using fx::col;
using fx::mat;

namespace {

const Rationals Q;

template <class K>
Matrix<K> random_matrix(const K& k, std::mt19937& rng, std::size_t r, std::size_t c, int spread = 3) {
  std::uniform_int_distribution<int> d(-spread, spread);
  std::bernoulli_distribution sparse(0.4);
  Matrix<K> m(k, r, c);
  for (std::size_t e = 0; e < r * c; ++e) m[e] = sparse(rng) ? k.zero() : k.from_int(d(rng));
  return m;
}

}  // namespace

TEST(Rref, IdentityIsFixed) {
  auto id = Matrix<Rationals>::identity(Q, 3);
  auto r = rref(id);
  EXPECT_EQ(r.reduced, id);
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Rref, RankOneSquare) {
  auto r = rref(mat(Q, {{1, 1}, {1, 1}}));
  EXPECT_EQ(r.reduced, mat(Q, {{1, 1}, {0, 0}}));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0}));
}

TEST(Rref, ScalarOverF3) {
  PrimeField f3(3);
  auto r = rref(mat(f3, {{2}}));
  EXPECT_EQ(r.reduced, mat(f3, {{1}}));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0}));
}

TEST(Rref, FractionsStayReduced) {
  auto m = Matrix<Rationals>::from_rows(Q, 2, {{Q.parse("2/4"), Q.parse("1/3")}, {Q.parse("3"), Q.parse("2")}});
  auto r = rref(m);
  EXPECT_EQ(Q.format(r.reduced(0, 1)), "2/3");
  EXPECT_EQ(r.pivots.size(), 1u);
}

TEST(Rref, EmptyMatrices) {
  EXPECT_EQ(rank(Matrix<Rationals>(Q, 0, 4)), 0u);
  EXPECT_EQ(kernel_basis(Matrix<Rationals>(Q, 0, 4)).dim(), 4u);
  EXPECT_EQ(kernel_basis(Matrix<Rationals>(Q, 3, 0)).dim(), 0u);
}

TEST(Kernel, IdentityHasNone) {
  EXPECT_EQ(kernel_basis(Matrix<Rationals>::identity(Q, 5)).dim(), 0u);
}

TEST(Kernel, RankOneSquare) {
  auto k = kernel_basis(mat(Q, {{1, 1}, {1, 1}}));
  ASSERT_EQ(k.dim(), 1u);
  EXPECT_EQ(k.basis(0, 0), -k.basis(0, 1));
  EXPECT_FALSE(is_zero(k.basis(0, 0)));
}

TEST(Kernel, TruncatedPolynomialMultiplication) {
  // m: k^4 -> k^2 on basis 1(x)1, 1(x)x, x(x)1, x(x)x
  auto m = mat(Q, {{1, 0, 0, 0}, {0, 1, 1, 0}});
  EXPECT_EQ(kernel_basis(m).dim(), 2u);
}

TEST(SolveAffine, ZeroSystem) {
  auto sol = solve_affine(Matrix<Rationals>(Q, 2, 3), Matrix<Rationals>(Q, 2, 1));
  ASSERT_TRUE(sol);
  EXPECT_TRUE(sol->particular.is_zero());
  EXPECT_EQ(sol->homogeneous.dim(), 3u);
}

TEST(SolveAffine, OneEquation) {
  auto sol = solve_affine(mat(Q, {{1, 1}}), col(Q, {1}));
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->particular, col(Q, {1, 0}));
  ASSERT_EQ(sol->homogeneous.dim(), 1u);
  EXPECT_EQ(sol->homogeneous.basis(0, 0), -sol->homogeneous.basis(0, 1));
}

TEST(SolveAffine, Contradiction) {
  auto a = mat(Q, {{1}, {1}});
  auto b = col(Q, {1, 2});
  EXPECT_FALSE(solve_affine(a, b));
  auto y = infeasibility_certificate(a, b);
  ASSERT_TRUE(y);
  EXPECT_TRUE((*y * a).is_zero());
  EXPECT_EQ((*y * b)(0, 0), Q.one());
}

TEST(SolveAffine, ShapeMismatchThrows) {
  EXPECT_THROW(solve_affine(mat(Q, {{1, 1}}), col(Q, {1, 2})), DimensionMismatch);
}

TEST(Quotient, NoRelations) {
  auto q = quotient_space(3, zero_subspace(Q, 3));
  EXPECT_EQ(q.dim, 3u);
  EXPECT_EQ(q.projection, (Matrix<Rationals>::identity(Q, 3)));
  EXPECT_EQ(q.section, (Matrix<Rationals>::identity(Q, 3)));
}

TEST(Quotient, AntidiagonalRelation) {
  auto q = quotient_space(2, row_space(mat(Q, {{1, -1}})));
  EXPECT_EQ(q.dim, 1u);
  EXPECT_EQ(q.projection * q.section, (Matrix<Rationals>::identity(Q, 1)));
  EXPECT_TRUE((q.projection * mat(Q, {{1}, {-1}})).is_zero());
}

TEST(Quotient, ByMultiplicationKernel) {
  auto ker = kernel_basis(mat(Q, {{1, 0, 0, 0}, {0, 1, 1, 0}}));
  auto q = quotient_space(4, ker);
  EXPECT_EQ(q.dim, 2u);
}

TEST(Fields, PrimeFieldArithmetic) {
  PrimeField f7(7);
  auto a = f7.from_int(3);
  EXPECT_EQ((a * inverse(a)).value, 1u);
  EXPECT_EQ(f7.from_int(-1).value, 6u);
  EXPECT_EQ(f7.parse("3/2").value, 5u);
  EXPECT_THROW(PrimeField(9), ValidationError);
  EXPECT_THROW(PrimeField(1), ValidationError);
}

TEST(Fields, RationalParsing) {
  EXPECT_EQ(Q.format(Q.parse("6/4")), "3/2");
  EXPECT_EQ(Q.format(Q.parse("-0/5")), "0");
  EXPECT_THROW(Q.parse("1/0"), ParseError);
  EXPECT_THROW(Q.parse("abc"), ParseError);
}

template <class K>
void rank_nullity_and_idempotence(const K& k, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> dim(0, 7);
  for (int trial = 0; trial < 60; ++trial) {
    auto m = random_matrix(k, rng, dim(rng), dim(rng));
    auto r = rref(m);
    auto ker = kernel_basis(m);
    EXPECT_EQ(r.pivots.size() + ker.dim(), m.cols());
    EXPECT_EQ(rref(r.reduced).reduced, r.reduced);
    for (std::size_t i = 1; i < r.pivots.size(); ++i) EXPECT_LT(r.pivots[i - 1], r.pivots[i]);
    EXPECT_TRUE((m * ker.columns()).is_zero());
    EXPECT_EQ(rank(m), rank(m.transpose()));
  }
}

TEST(Properties, RankNullityOverQ) { rank_nullity_and_idempotence(Q, 11); }
TEST(Properties, RankNullityOverF2) { rank_nullity_and_idempotence(PrimeField(2), 12); }
TEST(Properties, RankNullityOverF101) { rank_nullity_and_idempotence(PrimeField(101), 13); }

template <class K>
void sparse_matches_dense(const K& k, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> dim(0, 9);
  for (int trial = 0; trial < 60; ++trial) {
    auto m = random_matrix(k, rng, dim(rng), dim(rng));
    std::vector<SparseRow<K>> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      SparseRow<K> row;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_zero(m(i, j))) row.emplace_back(j, m(i, j));
      rows.push_back(row);
    }
    auto dense = kernel_basis(m);
    auto sparse = sparse_kernel(k, m.cols(), rows);
    EXPECT_EQ(sparse.basis, dense.basis);
    EXPECT_EQ(sparse.coord_columns, dense.coord_columns);
  }
}

TEST(Properties, SparseKernelOverQ) { sparse_matches_dense(Q, 21); }
TEST(Properties, SparseKernelOverF2) { sparse_matches_dense(PrimeField(2), 22); }
TEST(Properties, SparseKernelOverF101) { sparse_matches_dense(PrimeField(101), 23); }

TEST(Properties, SolveAffineIsExact) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    auto a = random_matrix(Q, rng, 4, 5);
    auto x = random_matrix(Q, rng, 5, 1);
    auto b = a * x;
    auto sol = solve_affine(a, b);
    ASSERT_TRUE(sol);
    EXPECT_EQ(a * sol->particular, b);
    EXPECT_TRUE((a * sol->homogeneous.columns()).is_zero());
    EXPECT_EQ(sol->homogeneous.dim(), 5 - rank(a));
  }
}

TEST(Properties, InfeasibleSystemsHaveCertificates) {
  std::mt19937 rng(22);
  int infeasible = 0;
  for (int trial = 0; trial < 80; ++trial) {
    auto a = random_matrix(Q, rng, 5, 2);
    auto b = random_matrix(Q, rng, 5, 1);
    auto sol = solve_affine(a, b);
    auto y = infeasibility_certificate(a, b);
    EXPECT_EQ(sol.has_value(), !y.has_value());
    if (y) {
      ++infeasible;
      EXPECT_TRUE((*y * a).is_zero());
      EXPECT_EQ((*y * b)(0, 0), Q.one());
    }
  }
  EXPECT_GT(infeasible, 0);
}

TEST(Properties, QuotientSections) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    auto rel = random_matrix(Q, rng, 3, 6);
    auto space = row_space(rel);
    auto q = quotient_space(6, space);
    EXPECT_EQ(q.dim, 6 - space.dim());
    EXPECT_EQ(q.projection * q.section, (Matrix<Rationals>::identity(Q, q.dim)));
    EXPECT_TRUE((q.projection * space.columns()).is_zero());
    for (std::size_t j = 0; j < q.dim; ++j) {
      std::size_t ones = 0;
      for (std::size_t i = 0; i < 6; ++i) ones += q.section(i, j) == Q.one();
      EXPECT_EQ(ones, 1u);
    }
  }
}

TEST(Properties, InverseRoundTrip) {
  std::mt19937 rng(24);
  int tested = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto a = random_matrix(Q, rng, 4, 4);
    if (rank(a) < 4) {
      EXPECT_THROW(inverse(a), Error);
      continue;
    }
    ++tested;
    EXPECT_EQ(a * inverse(a), (Matrix<Rationals>::identity(Q, 4)));
  }
  EXPECT_GT(tested, 0);
}

TEST(Matrix, KronMatchesPlainTensorIndex) {
  auto a = mat(Q, {{1, 2}, {3, 4}});
  auto b = mat(Q, {{0, 5}, {6, 7}});
  auto k = kron(a, b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t q = 0; q < 2; ++q) EXPECT_EQ(k(i * 2 + p, j * 2 + q), a(i, j) * b(p, q));
}

TEST(Matrix, KronProductsMatchExplicitKron) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_matrix(Q, rng, dim(rng), dim(rng));
    auto b = random_matrix(Q, rng, dim(rng), dim(rng));
    auto x = random_matrix(Q, rng, a.cols() * b.cols(), dim(rng));
    auto y = random_matrix(Q, rng, dim(rng), a.rows() * b.rows());
    EXPECT_EQ(kron_times(a, b, x), kron(a, b) * x);
    EXPECT_EQ(times_kron(y, a, b), y * kron(a, b));
  }
  EXPECT_THROW(kron_times(mat(Q, {{1}}), mat(Q, {{1}}), mat(Q, {{1}, {2}})), DimensionMismatch);
}

TEST(Properties, SparseRowSpaceMatchesDense) {
  std::mt19937 rng(32);
  std::uniform_int_distribution<std::size_t> dim(0, 8);
  for (int trial = 0; trial < 40; ++trial) {
    auto m = random_matrix(Q, rng, dim(rng), dim(rng));
    std::vector<SparseRow<Rationals>> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      SparseRow<Rationals> row;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_zero(m(i, j))) row.emplace_back(j, m(i, j));
      rows.push_back(row);
    }
    auto dense = row_space(m);
    auto sparse = sparse_row_space(Q, m.cols(), rows);
    EXPECT_EQ(sparse.basis, dense.basis);
    EXPECT_EQ(sparse.coord_columns, dense.coord_columns);
  }
}

TEST(Matrix, VecRoundTrip) {
  auto a = mat(Q, {{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(Matrix<Rationals>::unvec(a.vec(), 2, 3), a);
  EXPECT_THROW(a * a, DimensionMismatch);
}
