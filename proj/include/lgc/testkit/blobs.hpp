#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lgc/testkit/random.hpp"
#include "lgc/types.hpp"

namespace lgc::testkit
{

/// One Gaussian blob: `count` samples of N(mean, sigma).
struct BlobSpec
{
  std::vector<double> mean;
  std::vector<std::vector<double>> sigma;
  std::size_t count = 1;

  static BlobSpec isotropic(std::vector<double> mean, double stddev, std::size_t count)
  {
    const std::size_t k = mean.size();
    std::vector<std::vector<double>> s(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a)
    {
      s[a][a] = stddev * stddev;
    }
    return {std::move(mean), std::move(s), count};
  }
};

struct Blobs
{
  PointSet points;
  std::vector<std::int64_t> labels;  // blob index of each point
};

/// Lower Cholesky factor; throws ConfigError if `s` is not SPD.
inline std::vector<std::vector<double>> cholesky(const std::vector<std::vector<double>>& s)
{
  const std::size_t k = s.size();
  std::vector<std::vector<double>> l(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
  {
    if (s[i].size() != k)
    {
      throw ConfigError("blob covariance is not square");
    }
    for (std::size_t j = 0; j <= i; ++j)
    {
      if (s[i][j] != s[j][i])
      {
        throw ConfigError("blob covariance is not symmetric");
      }
      double acc = s[i][j];
      for (std::size_t p = 0; p < j; ++p)
      {
        acc -= l[i][p] * l[j][p];
      }
      if (i == j)
      {
        if (!(acc > 0.0))
        {
          throw ConfigError("blob covariance is not positive definite");
        }
        l[i][i] = std::sqrt(acc);
      }
      else
      {
        l[i][j] = acc / l[j][j];
      }
    }
  }
  return l;
}

/// Samples every blob in order (all of blob 0, then blob 1, ...).
inline Blobs gen_blobs(std::uint64_t seed, const std::vector<BlobSpec>& specs)
{
  if (specs.empty())
  {
    throw ConfigError("need at least one blob");
  }
  const std::size_t k = specs.front().mean.size();
  Rng rng(seed);
  std::vector<double> coords;
  std::vector<std::int64_t> labels;
  std::vector<double> z(k);
  for (std::size_t b = 0; b < specs.size(); ++b)
  {
    const auto& spec = specs[b];
    if (spec.mean.size() != k || spec.sigma.size() != k)
    {
      throw ConfigError("blob dimensions differ");
    }
    if (spec.count < 1)
    {
      throw ConfigError("blob count must be >= 1");
    }
    const auto l = cholesky(spec.sigma);
    for (std::size_t n = 0; n < spec.count; ++n)
    {
      for (auto& v : z)
      {
        v = rng.normal();
      }
      for (std::size_t i = 0; i < k; ++i)
      {
        double x = spec.mean[i];
        for (std::size_t j = 0; j <= i; ++j)
        {
          x += l[i][j] * z[j];
        }
        coords.push_back(x);
      }
      labels.push_back(std::int64_t(b));
    }
  }
  return {PointSet(std::move(coords), k), std::move(labels)};
}

}  // namespace lgc::testkit
