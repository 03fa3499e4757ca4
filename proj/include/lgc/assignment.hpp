#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "lgc/gaussian.hpp"
#include "lgc/parallel.hpp"
#include "lgc/types.hpp"

namespace lgc
{

using ClusterId = std::int64_t;
inline constexpr ClusterId kDropped = -1;

/// Per-point cluster labels plus the full density table they came from.
///
/// Densities are kept as logs so the argmax and the separation ratio stay
/// meaningful for points far from every cluster.
class Labeling
{
public:
  Labeling() = default;

  Labeling(std::size_t points, std::size_t clusters)
      : n_(points), c_(clusters), log_density_(points * clusters, 0.0),
        best_(points, 0), labels_(points, 0) {}

  /// Builds a labeling from a row-major N x C table of densities (not logs).
  static Labeling from_densities(std::size_t points, std::size_t clusters,
                                 const std::vector<double>& densities)
  {
    Labeling out(points, clusters);
    for (std::size_t i = 0; i < densities.size(); ++i)
    {
      out.log_density_[i] = std::log(densities[i]);
    }
    for (std::size_t i = 0; i < points; ++i)
    {
      out.choose(i);
    }
    return out;
  }

  std::size_t size() const { return n_; }
  std::size_t clusters() const { return c_; }

  ClusterId label(PointId i) const { return labels_[i]; }
  const std::vector<ClusterId>& labels() const { return labels_; }
  bool dropped(PointId i) const { return labels_[i] == kDropped; }
  void drop(PointId i) { labels_[i] = kDropped; }

  /// Argmax cluster, kept even after the point is dropped.
  std::size_t best(PointId i) const { return best_[i]; }

  double log_density(PointId i, std::size_t c) const
  {
    return log_density_[i * c_ + c];
  }
  double density(PointId i, std::size_t c) const
  {
    return std::exp(log_density(i, c));
  }
  double winning_density(PointId i) const { return density(i, best_[i]); }

  void set_log_density(PointId i, std::size_t c, double v)
  {
    log_density_[i * c_ + c] = v;
  }

  /// Recomputes the argmax for point i and resets its label. Ties go to the
  /// lowest cluster id.
  void choose(PointId i)
  {
    std::size_t top = 0;
    for (std::size_t c = 1; c < c_; ++c)
    {
      if (log_density(i, c) > log_density(i, top))
      {
        top = c;
      }
    }
    best_[i] = top;
    labels_[i] = ClusterId(top);
  }

  std::size_t dropped_count() const
  {
    return std::size_t(std::count(labels_.begin(), labels_.end(), kDropped));
  }

private:
  std::size_t n_ = 0;
  std::size_t c_ = 0;
  std::vector<double> log_density_;
  std::vector<std::size_t> best_;
  std::vector<ClusterId> labels_;
};

/// Optional post-assignment quality filters; unset means disabled.
struct FilterParams
{
  std::optional<double> l_p;    // drop if winning density < l_p
  std::optional<double> l_pct;  // drop this fraction of each cluster
  std::optional<double> l_s;    // drop if P1/(P1+P2) < l_s

  void validate() const
  {
    if (l_p && !(*l_p >= 0.0))
    {
      throw ConfigError("l_p must be >= 0");
    }
    if (l_pct && !(*l_pct >= 0.0 && *l_pct < 1.0))
    {
      throw ConfigError("l_pct must be in [0, 1)");
    }
    if (l_s && !(*l_s >= 0.5 && *l_s <= 1.0))
    {
      throw ConfigError("l_s must be in [0.5, 1]");
    }
  }
};

/// Labels every point with its highest-density cluster.
inline Labeling assign_all(const PointSet& points,
                           const std::vector<GaussianModel>& models,
                           DensityForm form = DensityForm::standard,
                           std::size_t threads = 1)
{
  if (models.empty())
  {
    throw ConfigError("assignment needs at least one model");
  }
  for (const auto& m : models)
  {
    if (m.dim() != points.dim())
    {
      throw ConfigError("model dimension does not match points");
    }
  }
  Labeling out(points.size(), models.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    for (std::size_t c = 0; c < models.size(); ++c)
    {
      out.set_log_density(i, c, log_density(points[i], models[c], form));
    }
    out.choose(i);
  });
  return out;
}

/// Drops points whose winning density is below l_p. Returns the drop count.
inline std::size_t filter_pvalue(Labeling& labeling, double l_p)
{
  std::size_t dropped = 0;
  for (PointId i = 0; i < labeling.size(); ++i)
  {
    if (!labeling.dropped(i) && labeling.winning_density(i) < l_p)
    {
      labeling.drop(i);
      ++dropped;
    }
  }
  return dropped;
}

/// Per cluster, drops the floor(l_pct * N_c) surviving members with the
/// lowest winning density; equal densities drop the lower id first.
inline std::size_t filter_percent(Labeling& labeling, double l_pct)
{
  std::vector<std::vector<PointId>> members(labeling.clusters());
  for (PointId i = 0; i < labeling.size(); ++i)
  {
    if (!labeling.dropped(i))
    {
      members[std::size_t(labeling.label(i))].push_back(i);
    }
  }
  std::size_t dropped = 0;
  for (auto& ids : members)
  {
    // Tolerance keeps products like 0.29 * 100 from flooring to 28.
    const auto cut = std::size_t(std::floor(l_pct * double(ids.size()) + 1e-9));
    std::stable_sort(ids.begin(), ids.end(), [&](PointId l, PointId r) {
      return labeling.log_density(l, labeling.best(l)) <
             labeling.log_density(r, labeling.best(r));
    });
    for (std::size_t j = 0; j < cut && j < ids.size(); ++j)
    {
      labeling.drop(ids[j]);
      ++dropped;
    }
  }
  return dropped;
}

/// Ratio P1/(P1+P2) of the two largest densities of point i; 1 when there is
/// a single cluster or P2 vanishes.
inline double separation_ratio(const Labeling& labeling, PointId i)
{
  if (labeling.clusters() < 2)
  {
    return 1.0;
  }
  double first = -std::numeric_limits<double>::infinity();
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < labeling.clusters(); ++c)
  {
    const double v = labeling.log_density(i, c);
    if (v > first)
    {
      second = first;
      first = v;
    }
    else if (v > second)
    {
      second = v;
    }
  }
  if (second == -std::numeric_limits<double>::infinity())
  {
    return 1.0;
  }
  return 1.0 / (1.0 + std::exp(second - first));
}

/// Drops points whose separation ratio is below l_s. No-op for one cluster.
inline std::size_t filter_separation(Labeling& labeling, double l_s)
{
  if (labeling.clusters() < 2)
  {
    return 0;
  }
  std::size_t dropped = 0;
  for (PointId i = 0; i < labeling.size(); ++i)
  {
    if (!labeling.dropped(i) && separation_ratio(labeling, i) < l_s)
    {
      labeling.drop(i);
      ++dropped;
    }
  }
  return dropped;
}

}  // namespace lgc
