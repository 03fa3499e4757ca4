#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lgc/gaussian.hpp"
#include "lgc/types.hpp"

namespace lgc
{

struct FitParams
{
  double epsilon = 0.01;
  std::size_t max_iter = 50;
  double ridge = 1e-8;
  DensityForm density_form = DensityForm::standard;

  void validate() const
  {
    if (!(epsilon > 0.0))
    {
      throw ConfigError("covariance epsilon must be positive");
    }
    if (max_iter < 1)
    {
      throw ConfigError("covariance max_iter must be >= 1");
    }
    if (!(ridge > 0.0))
    {
      throw ConfigError("ridge must be positive");
    }
  }
};

namespace detail
{

// Sum of w_i (x_i - mu)(x_i - mu)^T over members. Only the upper triangle is
// accumulated; the lower one is mirrored so the result is exactly symmetric.
template <class Weight>
Eigen::MatrixXd scatter(std::span<const PointId> members, const PointSet& points,
                        std::span<const double> mu, Weight&& weight)
{
  const std::size_t k = mu.size();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(Eigen::Index(k), Eigen::Index(k));
  std::vector<double> d(k);
  for (std::size_t j = 0; j < members.size(); ++j)
  {
    const auto x = points[members[j]];
    const double w = weight(j);
    for (std::size_t a = 0; a < k; ++a)
    {
      d[a] = x[a] - mu[a];
    }
    for (std::size_t m = 0; m < k; ++m)
    {
      for (std::size_t n = m; n < k; ++n)
      {
        s(Eigen::Index(m), Eigen::Index(n)) += w * d[m] * d[n];
      }
    }
  }
  for (Eigen::Index m = 0; m < s.rows(); ++m)
  {
    for (Eigen::Index n = 0; n < m; ++n)
    {
      s(m, n) = s(n, m);
    }
  }
  return s;
}

}  // namespace detail

/// Unweighted scatter about mu divided by N_c.
inline Eigen::MatrixXd covariance_plain(std::span<const PointId> members,
                                        const PointSet& points,
                                        std::span<const double> mu)
{
  if (members.empty())
  {
    throw ConfigError("covariance needs at least one member");
  }
  const double w = 1.0 / double(members.size());
  return detail::scatter(members, points, mu, [w](std::size_t) { return w; });
}

/// Normalized density weights of the members under `model`.
///
/// Computed from log densities shifted by their maximum, so the ratios are
/// the same as P_i / sum_j P_j but do not underflow for far points. If no
/// finite weight exists the weights fall back to 1/N_c and `fallback` is set.
inline std::vector<double> density_weights(std::span<const PointId> members,
                                           const PointSet& points,
                                           const GaussianModel& model,
                                           DensityForm form, bool* fallback = nullptr)
{
  std::vector<double> w(members.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < members.size(); ++j)
  {
    w[j] = log_density(points[members[j]], model, form);
    top = std::max(top, w[j]);
  }
  double total = 0.0;
  if (std::isfinite(top))
  {
    for (double& v : w)
    {
      v = std::exp(v - top);
      total += v;
    }
  }
  const bool uniform = !(total > 0.0) || !std::isfinite(total);
  if (fallback)
  {
    *fallback = uniform;
  }
  const double inv = uniform ? 0.0 : 1.0 / total;
  for (double& v : w)
  {
    v = uniform ? 1.0 / double(members.size()) : v * inv;
  }
  return w;
}

struct WeightedCovariance
{
  Eigen::MatrixXd sigma;
  bool uniform_fallback = false;
};

/// Density-weighted scatter about mu, weights w_i = P(x_i) / sum_j P(x_j)
/// with P taken from `input`.
inline WeightedCovariance covariance_weighted(std::span<const PointId> members,
                                              const PointSet& points,
                                              std::span<const double> mu,
                                              const GaussianModel& input,
                                              DensityForm form = DensityForm::standard)
{
  if (members.empty())
  {
    throw ConfigError("covariance needs at least one member");
  }
  WeightedCovariance out;
  const auto w = density_weights(members, points, input, form, &out.uniform_fallback);
  out.sigma = detail::scatter(members, points, mu, [&](std::size_t j) { return w[j]; });
  return out;
}

/// Self-consistent covariance estimate for one cluster.
///
/// Starts from the plain covariance (used as both of the two previous
/// iterates). Each step evaluates the weights under the average of the last
/// two iterates and recomputes the weighted covariance; it stops once no
/// element differs from that average by epsilon or more.
inline GaussianModel fit_covariance(std::span<const PointId> members,
                                    const PointSet& points,
                                    std::span<const double> mu,
                                    const FitParams& params = {})
{
  params.validate();
  const Eigen::Index k = Eigen::Index(mu.size());
  const Eigen::VectorXd mean = Eigen::Map<const Eigen::VectorXd>(mu.data(), k);

  if (members.size() < 2)
  {
    GaussianModel model = make_model(
        mean, covariance_plain(members, points, mu), params.ridge);
    model.degenerate = true;
    return model;
  }

  Eigen::MatrixXd previous = covariance_plain(members, points, mu);
  Eigen::MatrixXd current = previous;
  bool converged = false;
  bool fallback = false;
  std::size_t t = 0;
  while (t < params.max_iter)
  {
    ++t;
    const Eigen::MatrixXd input = 0.5 * (current + previous);
    const GaussianModel weighting = make_model(mean, input, params.ridge);
    WeightedCovariance next =
        covariance_weighted(members, points, mu, weighting, params.density_form);
    fallback = fallback || next.uniform_fallback;
    const double change = (next.sigma - input).cwiseAbs().maxCoeff();
    previous = std::move(current);
    current = std::move(next.sigma);
    if (change < params.epsilon)
    {
      converged = true;
      break;
    }
  }

  GaussianModel model = make_model(mean, current, params.ridge);
  model.iterations = t;
  model.converged = converged;
  model.weight_fallback = fallback;
  model.degenerate = model.ridge > 0.0;
  return model;
}

}  // namespace lgc
