#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "assd/linalg.hpp"
#include "assd/oracle.hpp"
#include "support/random.hpp"

using namespace assd;
using assd::test::gaussian;
using assd::test::rel_diff;

TEST(MinNorm, IdentityReturnsRhs) {
  const Vector g = linalg::min_norm_least_squares(DenseMatrix::Identity(2, 2), Vector{{3.0, 4.0}});
  EXPECT_NEAR(g[0], 3.0, 1e-14);
  EXPECT_NEAR(g[1], 4.0, 1e-14);
}

TEST(MinNorm, WideSelectorZeroOnNullCoordinate) {
  DenseMatrix X{{1, 0, 0}, {0, 1, 0}};
  const Vector g = linalg::min_norm_least_squares(X, Vector{{5.0, 7.0}});
  ASSERT_EQ(g.size(), 3);
  EXPECT_NEAR(g[0], 5.0, 1e-14);
  EXPECT_NEAR(g[1], 7.0, 1e-14);
  EXPECT_EQ(g[2], 0.0);
}

TEST(MinNorm, MatchesSvdOracleOnSmallGaussian) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DenseMatrix X = gaussian(4, 8, seed);
    const Vector y = gaussian(4, seed + 1000);
    const Vector ref = oracle::pinv_via_svd(X) * y;
    EXPECT_LE(rel_diff(linalg::min_norm_least_squares(X, y), ref), 1e-10) << "seed " << seed;
    EXPECT_LE(rel_diff(linalg::min_norm_least_squares_svd(X, y), ref), 1e-10) << "seed " << seed;
  }
}

TEST(MinNorm, TallAndRankDeficientInputsProject) {
  // Tall full-rank, and a wide matrix with a repeated row (rank 3 of 4).
  DenseMatrix tall = gaussian(9, 4, 7);
  DenseMatrix wide = gaussian(4, 10, 8);
  wide.row(3) = wide.row(1);
  for (const DenseMatrix* X : {&tall, &wide}) {
    const Vector y = gaussian(X->rows(), 99);
    const Vector g = linalg::min_norm_least_squares(*X, y);
    const Vector r = y - *X * g;
    for (Index i = 0; i < X->cols(); ++i)
      EXPECT_LE(std::abs(X->col(i).dot(r)), 1e-8 * X->col(i).norm() * y.norm());
    EXPECT_LE(rel_diff(g, oracle::pinv_via_svd(*X) * y), 1e-8);
  }
}

TEST(MinNorm, NoSolutionWithNullSpaceComponentIsShorter) {
  const DenseMatrix X = gaussian(5, 12, 21);
  const Vector y = gaussian(5, 22);
  const Vector g = linalg::min_norm_least_squares(X, y);
  const oracle::SvdFactors f = oracle::full_svd(X);
  const Index r = f.rank(1e-12);
  for (Index k = r; k < X.cols(); ++k) {
    const Vector z = g + 0.3 * f.V.col(k);
    EXPECT_LE((X * z - X * g).norm(), 1e-10 * y.norm());
    EXPECT_LE(g.norm(), z.norm());
  }
}

TEST(MinNorm, NoiselessGuidanceIsProjectionOfTruth) {
  const DenseMatrix X = gaussian(20, 60, 5);
  Vector beta0 = Vector::Zero(60);
  beta0[3] = 1.0;
  beta0[17] = -0.7;
  beta0[44] = 0.55;
  const Vector g = linalg::min_norm_least_squares(X, X * beta0);
  const auto ref = oracle::exact_guidance_noiseless(X, beta0);
  EXPECT_LE(rel_diff(g, ref.gamma), 1e-8);
}

TEST(MinNorm, Errors) {
  EXPECT_THROW(linalg::min_norm_least_squares(DenseMatrix::Identity(2, 2), Vector::Ones(3)), ContractError);
  EXPECT_THROW(linalg::min_norm_least_squares(DenseMatrix::Identity(2, 2), Vector::Ones(2), -1.0), ContractError);
  DenseMatrix bad = DenseMatrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(linalg::min_norm_least_squares(bad, Vector::Ones(2)), InputError);
  Vector inf = Vector::Ones(2);
  inf[1] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(linalg::min_norm_least_squares(DenseMatrix::Identity(2, 2), inf), InputError);
}

TEST(SolveGram, RefusesNearSingular) {
  DenseMatrix G{{1.0, 1.0}, {1.0, 1.0 + 1e-14}};
  EXPECT_FALSE(linalg::solve_gram(G, Vector::Ones(2), 1e-10).has_value());
  DenseMatrix H{{4.0, 1.0}, {1.0, 3.0}};
  const auto z = linalg::solve_gram(H, Vector{{1.0, 2.0}}, 1e-10);
  ASSERT_TRUE(z.has_value());
  EXPECT_LE((H * *z - Vector{{1.0, 2.0}}).norm(), 1e-14);
}

TEST(Guidance, RankingByMagnitudeThenColumn) {
  const auto g = linalg::make_guidance(Vector{{0.5, -2.0, 2.0, 0.1}}, IndexList{9, 4, 7, 1});
  // |−2| at column 4 and |2| at column 7 tie; column 4 ranks first.
  ASSERT_EQ(g.ranking.size(), 4u);
  EXPECT_EQ(g.columns[static_cast<std::size_t>(g.ranking[0])], 4);
  EXPECT_EQ(g.columns[static_cast<std::size_t>(g.ranking[1])], 7);
  EXPECT_EQ(g.columns[static_cast<std::size_t>(g.ranking[2])], 9);
  EXPECT_EQ(g.columns[static_cast<std::size_t>(g.ranking[3])], 1);
}

TEST(Guidance, RankingIsPermutationWithDefaultColumns) {
  const auto g = linalg::make_guidance(gaussian(30, 3));
  std::vector<bool> seen(30, false);
  for (std::size_t j = 0; j < g.ranking.size(); ++j) {
    seen[static_cast<std::size_t>(g.ranking[j])] = true;
    if (j + 1 < g.ranking.size()) EXPECT_GE(std::abs(g.values[g.ranking[j]]), std::abs(g.values[g.ranking[j + 1]]));
  }
  for (bool s : seen) EXPECT_TRUE(s);
  EXPECT_EQ(g.columns[5], 5);
}

TEST(Deflate, HandExamples) {
  const Vector a = linalg::deflate_column(Vector{{1.0, 1.0}}, Vector{{1.0, 0.0}});
  EXPECT_DOUBLE_EQ(a[0], 0.0);
  EXPECT_DOUBLE_EQ(a[1], 1.0);
  const Vector b = linalg::deflate_residual(Vector{{2.0, 2.0}}, Vector{{1.0, 0.0}});
  EXPECT_DOUBLE_EQ(b[0], 0.0);
  EXPECT_DOUBLE_EQ(b[1], 2.0);
}

TEST(Deflate, OrthogonalUnchangedCollinearVanishes) {
  const Vector xi = linalg::deflate_column(Vector{{1.0, 0.0}}, Vector{{0.0, 2.0}});
  EXPECT_EQ(xi, (Vector{{1.0, 0.0}}));
  const Vector xk{{0.3, -1.2, 2.0}};
  EXPECT_LE(linalg::deflate_column(3.0 * xk, xk).norm(), 1e-14);
  EXPECT_LE(linalg::deflate_residual(-2.5 * xk, xk).norm(), 1e-14);
  const Vector y{{0.0, 0.0, 1.0}};
  EXPECT_EQ(linalg::deflate_residual(y, Vector{{1.0, 0.0, 0.0}}), y);
}

TEST(Deflate, ResultOrthogonalToPivot) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Vector xi = gaussian(40, seed);
    const Vector xk = gaussian(40, seed + 500);
    const Vector r = linalg::deflate_column(xi, xk);
    EXPECT_LE(std::abs(r.dot(xk)), 1e-10 * xi.norm() * xk.norm());
  }
}

TEST(Deflate, Errors) {
  EXPECT_THROW(linalg::deflate_column(Vector::Ones(2), Vector::Zero(2)), DegeneratePivotError);
  EXPECT_THROW(linalg::deflate_column(Vector::Ones(2), Vector::Constant(2, 1e-12), 1e-10), DegeneratePivotError);
  EXPECT_THROW(linalg::deflate_residual(Vector::Ones(3), Vector::Ones(2)), ContractError);
}

TEST(Refit, Examples) {
  const IndexList both{0, 1};
  const Vector b = linalg::refit_on_support(DenseMatrix::Identity(2, 2), Vector{{3.0, 4.0}}, both);
  EXPECT_NEAR(b[0], 3.0, 1e-14);
  EXPECT_NEAR(b[1], 4.0, 1e-14);

  const DenseMatrix X = gaussian(6, 10, 3);
  const Vector y = gaussian(6, 4);
  const IndexList one{7};
  const Vector s = linalg::refit_on_support(X, y, one);
  EXPECT_NEAR(s[0], y.dot(X.col(7)) / X.col(7).squaredNorm(), 1e-13);

  EXPECT_EQ(linalg::refit_on_support(X, y, IndexList{}).size(), 0);
}

TEST(Refit, NoiselessTrueSupportRecoversCoefficients) {
  const DenseMatrix X = gaussian(6, 10, 11);
  Vector beta0 = Vector::Zero(10);
  beta0[2] = 0.8;
  beta0[6] = -0.6;
  const IndexList support{2, 6};
  const Vector b = linalg::refit_on_support(X, X * beta0, support);
  EXPECT_NEAR(b[0], 0.8, 1e-10);
  EXPECT_NEAR(b[1], -0.6, 1e-10);
}

TEST(Refit, ResidualNeverExceedsResponse) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const DenseMatrix X = gaussian(8, 15, seed);
    const Vector y = gaussian(8, seed + 77);
    IndexList support{static_cast<Index>(seed % 15), static_cast<Index>((seed * 7) % 15), 3, 3};
    const Vector b = linalg::refit_on_support(X, y, support);
    const Vector full = linalg::scatter(IndexList{}, Vector{}, 15);
    Vector beta = Vector::Zero(15);
    for (std::size_t j = 0; j < support.size(); ++j) beta[support[j]] += b[static_cast<Index>(j)];
    EXPECT_LE((y - X * beta).norm(), y.norm() * (1.0 + 1e-12));
    EXPECT_EQ(full.size(), 15);
  }
}

TEST(Scatter, PlacesValues) {
  const IndexList s{4, 1};
  const Vector v = linalg::scatter(s, Vector{{2.0, -3.0}}, 6);
  EXPECT_EQ(v, (Vector{{0.0, -3.0, 0.0, 0.0, 2.0, 0.0}}));
}
