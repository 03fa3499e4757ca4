#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "lgc/pipeline.hpp"
#include "lgc/testkit/ari.hpp"
#include "lgc/testkit/blobs.hpp"

namespace
{

using lgc::ClusterConfig;
using lgc::testkit::BlobSpec;
using lgc::testkit::gen_blobs;

lgc::testkit::Blobs two_blobs()
{
  return gen_blobs(2024, {BlobSpec::isotropic({0, 0}, 1.0, 500),
                          BlobSpec::isotropic({10, 0}, 1.0, 500)});
}

std::vector<double> blob_mean(const lgc::testkit::Blobs& b, std::int64_t label)
{
  std::vector<double> m(b.points.dim(), 0.0);
  double n = 0;
  for (std::size_t i = 0; i < b.labels.size(); ++i)
  {
    if (b.labels[i] == label)
    {
      for (std::size_t a = 0; a < m.size(); ++a)
      {
        m[a] += b.points[i][a];
      }
      n += 1;
    }
  }
  for (auto& v : m)
  {
    v /= n;
  }
  return m;
}

TEST(Pipeline, TwoBlobsAreRecovered)
{
  const auto blobs = two_blobs();
  ClusterConfig config;
  config.d_s = 4.0;
  const auto result = lgc::run(blobs.points, config);
  ASSERT_EQ(result.models.size(), 2u);
  for (std::int64_t b = 0; b < 2; ++b)
  {
    const auto truth = blob_mean(blobs, b);
    const auto& mu = result.models[std::size_t(b)].mu;
    EXPECT_LT(std::hypot(mu[0] - truth[0], mu[1] - truth[1]), 0.15);
  }
  EXPECT_GE(lgc::testkit::adjusted_rand(result.labeling.labels(), blobs.labels), 0.99);
  EXPECT_EQ(result.labeling.dropped_count(), 0u);
}

TEST(Pipeline, LargeSeparationMergesToOneCluster)
{
  ClusterConfig config;
  config.d_s = 12.0;
  EXPECT_EQ(lgc::run(two_blobs().points, config).models.size(), 1u);
}

TEST(Pipeline, ReportIsConsistent)
{
  ClusterConfig config;
  config.d_s = 4.0;
  config.filters.l_pct = 0.1;
  config.filters.l_s = 0.9;
  const auto result = lgc::run(two_blobs().points, config);
  const auto& r = result.report;
  ASSERT_EQ(r.timings.size(), 6u);
  const char* steps[] = {"index", "seed", "converge", "fit", "assign", "filter"};
  for (std::size_t i = 0; i < 6; ++i)
  {
    EXPECT_EQ(r.timings[i].step, steps[i]);
    EXPECT_GE(r.timings[i].ms, 0.0);
  }
  EXPECT_GE(r.seeds, r.seeds_after_prune);
  EXPECT_GE(r.seeds_after_prune, r.clusters);
  EXPECT_EQ(r.per_cluster.size(), r.clusters);
  EXPECT_EQ(r.dropped_p + r.dropped_pct + r.dropped_s, result.labeling.dropped_count());
  EXPECT_GT(r.dropped_pct, 0u);
}

TEST(Pipeline, ThreadCountInvariance)
{
  const auto blobs = gen_blobs(5, {BlobSpec::isotropic({0, 0}, 1.0, 700),
                                   BlobSpec::isotropic({9, 2}, 1.0, 700),
                                   BlobSpec::isotropic({3, 9}, 1.0, 700)});
  ClusterConfig config;
  config.d_s = 4.0;
  config.filters.l_pct = 0.05;
  config.thread_count = 1;
  const auto one = lgc::run(blobs.points, config);
  config.thread_count = 4;
  const auto four = lgc::run(blobs.points, config);
  ASSERT_EQ(one.models.size(), four.models.size());
  for (std::size_t c = 0; c < one.models.size(); ++c)
  {
    EXPECT_EQ(one.models[c].mu, four.models[c].mu);
    EXPECT_EQ(one.models[c].sigma, four.models[c].sigma);
    EXPECT_EQ(one.models[c].iterations, four.models[c].iterations);
  }
  EXPECT_EQ(one.labeling.labels(), four.labeling.labels());
  EXPECT_EQ(one.report.seeds, four.report.seeds);
  EXPECT_EQ(one.report.dropped_pct, four.report.dropped_pct);
}

TEST(Pipeline, NoSurvivingSeedIsReported)
{
  ClusterConfig config;
  config.d_s = 4.0;
  config.min_count = 100000;
  EXPECT_THROW(lgc::run(two_blobs().points, config), lgc::NoClustersError);
}

TEST(Pipeline, InvalidConfigIsRejected)
{
  ClusterConfig config;
  config.d_s = 0.0;
  EXPECT_THROW(lgc::run(two_blobs().points, config), lgc::ConfigError);
  config.d_s = 1.0;
  config.filters.l_s = 0.2;
  EXPECT_THROW(lgc::run(two_blobs().points, config), lgc::ConfigError);
}

TEST(SuggestDs, MedianSpanOverTwenty)
{
  const auto box = lgc::PointSet::from_rows({{0, 0, 0}, {100, 100, 100}});
  EXPECT_DOUBLE_EQ(lgc::suggest_ds(box), 5.0);
  const auto flat = lgc::PointSet::from_rows({{0, 0, 7}, {100, 40, 7}});
  EXPECT_DOUBLE_EQ(lgc::suggest_ds(flat), 70.0 / 20.0);
  EXPECT_GT(lgc::suggest_ds(two_blobs().points), 0.0);
}

}  // namespace
