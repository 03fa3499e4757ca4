#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lgc/testkit/ari.hpp"
#include "lgc/testkit/blobs.hpp"
#include "lgc/testkit/oracles.hpp"
#include "lgc/testkit/random.hpp"

namespace
{

using namespace lgc::testkit;

TEST(Rng, EngineIsTheStandardOne)
{
  // The standard pins the 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 ref;
  Rng rng(std::mt19937_64::default_seed);
  std::uint64_t last = 0;
  for (int i = 0; i < 10000; ++i)
  {
    last = rng.bits();
  }
  EXPECT_EQ(last, 9981545732273789042ull);
  (void)ref;
}

TEST(Rng, UniformAndNormalMoments)
{
  Rng rng(1);
  double sum = 0, sq = 0;
  for (int i = 0; i < 100000; ++i)
  {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / 1e5, 0.0, 0.02);
  EXPECT_NEAR(sq / 1e5, 1.0, 0.02);
}

TEST(GenBlobs, SeededReproducibility)
{
  const std::vector<BlobSpec> specs{BlobSpec::isotropic({0, 0}, 1.0, 50),
                                    BlobSpec::isotropic({5, 5}, 2.0, 30)};
  const auto a = gen_blobs(42, specs);
  const auto b = gen_blobs(42, specs);
  const auto c = gen_blobs(43, specs);
  EXPECT_TRUE(std::equal(a.points.coords().begin(), a.points.coords().end(),
                         b.points.coords().begin()));
  EXPECT_FALSE(std::equal(a.points.coords().begin(), a.points.coords().end(),
                          c.points.coords().begin()));
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.points.size(), 80u);
  EXPECT_EQ(a.labels[49], 0);
  EXPECT_EQ(a.labels[50], 1);
}

TEST(GenBlobs, SinglePoint)
{
  const auto b = gen_blobs(1, {BlobSpec::isotropic({3}, 1.0, 1)});
  EXPECT_EQ(b.points.size(), 1u);
  EXPECT_TRUE(std::isfinite(b.points[0][0]));
}

TEST(GenBlobs, SampleCovarianceWithinFiveStandardErrors)
{
  const Matrix sigma{{2.0, 0.8, -0.3}, {0.8, 1.0, 0.2}, {-0.3, 0.2, 0.5}};
  const std::size_t n = 10000;
  const auto b = gen_blobs(9, {BlobSpec{{0, 0, 0}, sigma, n}});
  std::vector<lgc::PointId> ids(n);
  std::iota(ids.begin(), ids.end(), lgc::PointId{0});
  const std::vector<double> zero{0, 0, 0};
  const auto s = naive_plain_cov(b.points, ids, zero);
  for (std::size_t m = 0; m < 3; ++m)
  {
    for (std::size_t k = 0; k < 3; ++k)
    {
      // Var of one product term is S_mm S_kk + S_mk^2 for a zero-mean normal.
      const double se = std::sqrt((sigma[m][m] * sigma[k][k] + sigma[m][k] * sigma[m][k]) / double(n));
      EXPECT_NEAR(s[m][k], sigma[m][k], 5 * se) << m << "," << k;
    }
  }
}

TEST(GenBlobs, RejectsNonSpd)
{
  EXPECT_THROW(gen_blobs(1, {BlobSpec{{0, 0}, {{1, 2}, {2, 1}}, 5}}), lgc::ConfigError);
  EXPECT_THROW(gen_blobs(1, {}), lgc::ConfigError);
}

TEST(BruteForceRange, FullAndEmpty)
{
  const auto p = lgc::PointSet::from_rows({{0, 0}, {1, 1}, {2, 0}});
  const std::vector<double> c{1, 0.5};
  EXPECT_EQ(brute_force_range(p, c, 10.0), (std::vector<lgc::PointId>{0, 1, 2}));
  const std::vector<double> far{50, 50};
  EXPECT_TRUE(brute_force_range(p, far, 1.0).empty());
  const std::vector<double> origin{0, 0};
  EXPECT_EQ(brute_force_range(p, origin, 1.0), (std::vector<lgc::PointId>{0, 1}));
}

TEST(NaiveWeightedCov, DegenerateCases)
{
  const auto p = lgc::PointSet::from_rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  const std::vector<lgc::PointId> ids{0, 1, 2, 3};
  const std::vector<double> mu{0, 0};
  const Matrix eye{{1, 0}, {0, 1}};
  const auto w = naive_weighted_cov(p, ids, mu, eye);
  const auto plain = naive_plain_cov(p, ids, mu);
  for (int m = 0; m < 2; ++m)
  {
    for (int n = 0; n < 2; ++n)
    {
      EXPECT_NEAR(w[m][n], plain[m][n], 1e-15);
    }
  }
  const std::vector<lgc::PointId> pair{0, 1};
  const auto s = naive_weighted_cov(p, pair, mu, eye);
  EXPECT_DOUBLE_EQ(s[0][0], 1.0);
  EXPECT_DOUBLE_EQ(s[1][1], 0.0);
}

TEST(GaussJordan, InverseAndDeterminant)
{
  const auto r = gauss_jordan({{0, 2}, {3, 1}});
  EXPECT_DOUBLE_EQ(r.det, -6.0);
  EXPECT_NEAR(r.inverse[0][0], -1.0 / 6, 1e-15);
  EXPECT_NEAR(r.inverse[0][1], 2.0 / 6, 1e-15);
}

TEST(AdjustedRand, Identities)
{
  const std::vector<std::int64_t> a{0, 0, 1, 1, 2, 2};
  EXPECT_DOUBLE_EQ(adjusted_rand(a, a), 1.0);
  const std::vector<std::int64_t> permuted{5, 5, 0, 0, 3, 3};
  EXPECT_DOUBLE_EQ(adjusted_rand(a, permuted), 1.0);
}

TEST(AdjustedRand, AllSameAgainstBalancedTwoClusters)
{
  // 2x1 contingency table: the index equals its expectation, so ARI is 0.
  const std::vector<std::int64_t> truth{0, 0, 0, 0, 1, 1, 1, 1};
  const std::vector<std::int64_t> lumped(8, 0);
  EXPECT_NEAR(adjusted_rand(lumped, truth), 0.0, 1e-15);
}

TEST(AdjustedRand, KnownValueAndDroppedPoints)
{
  // Standard worked example: ARI = 0.24242...
  const std::vector<std::int64_t> a{0, 0, 0, 1, 1, 1};
  const std::vector<std::int64_t> b{0, 0, 1, 1, 2, 2};
  EXPECT_NEAR(adjusted_rand(a, b), 0.24242424242424243, 1e-12);
  const std::vector<std::int64_t> a_drop{0, 0, 0, 1, 1, 1, -1};
  const std::vector<std::int64_t> b_drop{0, 0, 1, 1, 2, 2, 0};
  EXPECT_NEAR(adjusted_rand(a_drop, b_drop), 0.24242424242424243, 1e-12);
}

}  // namespace
