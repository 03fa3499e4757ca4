#pragma once

// Straight-line reference implementations used to check the library. Nothing
// here includes or calls the modules it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "lgc/types.hpp"

namespace lgc::testkit
{

using Matrix = std::vector<std::vector<double>>;

/// Linear scan with the closed-box predicate; ascending ids.
inline std::vector<PointId> brute_force_range(const PointSet& points,
                                              std::span<const double> center,
                                              double half_width)
{
  std::vector<PointId> out;
  for (PointId i = 0; i < points.size(); ++i)
  {
    bool in = true;
    for (std::size_t a = 0; a < center.size() && in; ++a)
    {
      in = std::abs(points[i][a] - center[a]) <= half_width;
    }
    if (in)
    {
      out.push_back(i);
    }
  }
  return out;
}

struct InverseDet
{
  Matrix inverse;
  double det = 1.0;
};

/// Gauss-Jordan elimination with partial pivoting.
inline InverseDet gauss_jordan(Matrix a)
{
  const std::size_t k = a.size();
  Matrix inv(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
  {
    inv[i][i] = 1.0;
  }
  double det = 1.0;
  for (std::size_t col = 0; col < k; ++col)
  {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
    {
      if (std::abs(a[r][col]) > std::abs(a[piv][col]))
      {
        piv = r;
      }
    }
    if (a[piv][col] == 0.0)
    {
      throw std::runtime_error("singular matrix");
    }
    if (piv != col)
    {
      std::swap(a[piv], a[col]);
      std::swap(inv[piv], inv[col]);
      det = -det;
    }
    const double p = a[col][col];
    det *= p;
    for (std::size_t c = 0; c < k; ++c)
    {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (std::size_t r = 0; r < k; ++r)
    {
      if (r == col)
      {
        continue;
      }
      const double f = a[r][col];
      for (std::size_t c = 0; c < k; ++c)
      {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return {inv, det};
}

/// Closed-form Gaussian density. `literal` selects
/// (2 pi |S|)^-1/2 exp(-q) instead of (2 pi)^-K/2 |S|^-1/2 exp(-q/2).
inline double naive_density(std::span<const double> x, std::span<const double> mu,
                            const Matrix& sigma, bool literal = false)
{
  const std::size_t k = mu.size();
  const auto [inv, det] = gauss_jordan(sigma);
  double q = 0.0;
  for (std::size_t m = 0; m < k; ++m)
  {
    for (std::size_t n = 0; n < k; ++n)
    {
      q += (x[m] - mu[m]) * inv[m][n] * (x[n] - mu[n]);
    }
  }
  const double two_pi = 2.0 * std::numbers::pi;
  if (literal)
  {
    return std::exp(-q) / std::sqrt(two_pi * det);
  }
  return std::exp(-0.5 * q) / std::sqrt(std::pow(two_pi, double(k)) * det);
}

inline Matrix naive_plain_cov(const PointSet& points, std::span<const PointId> members,
                              std::span<const double> mu)
{
  const std::size_t k = mu.size();
  Matrix s(k, std::vector<double>(k, 0.0));
  for (const PointId i : members)
  {
    for (std::size_t m = 0; m < k; ++m)
    {
      for (std::size_t n = 0; n < k; ++n)
      {
        s[m][n] += (points[i][m] - mu[m]) * (points[i][n] - mu[n]) / double(members.size());
      }
    }
  }
  return s;
}

/// Weighted covariance with w_i = P_i / sum_j P_j taken directly.
inline Matrix naive_weighted_cov(const PointSet& points, std::span<const PointId> members,
                                 std::span<const double> mu, const Matrix& input_sigma,
                                 bool literal = false)
{
  const std::size_t k = mu.size();
  std::vector<double> p;
  double total = 0.0;
  for (const PointId i : members)
  {
    p.push_back(naive_density(points[i], mu, input_sigma, literal));
    total += p.back();
  }
  Matrix s(k, std::vector<double>(k, 0.0));
  for (std::size_t j = 0; j < members.size(); ++j)
  {
    const double w = p[j] / total;
    for (std::size_t m = 0; m < k; ++m)
    {
      for (std::size_t n = 0; n < k; ++n)
      {
        s[m][n] += w * (points[members[j]][m] - mu[m]) * (points[members[j]][n] - mu[n]);
      }
    }
  }
  return s;
}

struct NaiveFit
{
  Matrix sigma;
  std::size_t iterations = 0;
  bool converged = false;
};

/// The averaged self-consistent covariance loop, written out directly.
/// Assumes every iterate stays non-singular.
inline NaiveFit naive_fit_covariance(const PointSet& points, std::span<const PointId> members,
                                     std::span<const double> mu, double epsilon,
                                     std::size_t max_iter, bool literal = false)
{
  const std::size_t k = mu.size();
  Matrix older = naive_plain_cov(points, members, mu);
  Matrix newer = older;
  NaiveFit out;
  for (std::size_t t = 1; t <= max_iter; ++t)
  {
    Matrix input(k, std::vector<double>(k));
    for (std::size_t m = 0; m < k; ++m)
    {
      for (std::size_t n = 0; n < k; ++n)
      {
        input[m][n] = 0.5 * (newer[m][n] + older[m][n]);
      }
    }
    Matrix next = naive_weighted_cov(points, members, mu, input, literal);
    double change = 0.0;
    for (std::size_t m = 0; m < k; ++m)
    {
      for (std::size_t n = 0; n < k; ++n)
      {
        change = std::max(change, std::abs(next[m][n] - input[m][n]));
      }
    }
    older = newer;
    newer = next;
    out.iterations = t;
    if (change < epsilon)
    {
      out.converged = true;
      break;
    }
  }
  out.sigma = newer;
  return out;
}

/// argmax over a row of densities, lowest index on ties.
inline std::size_t naive_argmax(std::span<const double> row)
{
  std::size_t best = 0;
  for (std::size_t c = 1; c < row.size(); ++c)
  {
    if (row[c] > row[best])
    {
      best = c;
    }
  }
  return best;
}

}  // namespace lgc::testkit
