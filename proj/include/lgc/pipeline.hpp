#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lgc/assignment.hpp"
#include "lgc/centroid_search.hpp"
#include "lgc/covariance.hpp"
#include "lgc/gaussian.hpp"
#include "lgc/parallel.hpp"
#include "lgc/spatial_index.hpp"
#include "lgc/types.hpp"

namespace lgc
{

struct ClusterConfig
{
  double d_s = 1.0;
  std::size_t min_count = 0;  // L
  double epsilon_centroid = 0.01;
  double epsilon_sigma = 0.01;
  std::size_t max_iter_centroid = 100;
  std::size_t max_iter_sigma = 50;
  double ridge = 1e-8;
  DensityForm density_form = DensityForm::standard;
  FilterParams filters;
  std::size_t max_seeds = 10'000'000;
  std::size_t thread_count = 0;  // 0 = auto

  SeedParams seed_params() const
  {
    return SeedParams{d_s,      min_count, epsilon_centroid, max_iter_centroid,
                      max_seeds, resolve_threads(thread_count)};
  }

  FitParams fit_params() const
  {
    return FitParams{epsilon_sigma, max_iter_sigma, ridge, density_form};
  }

  void validate() const
  {
    seed_params().validate();
    fit_params().validate();
    filters.validate();
  }
};

struct StepTiming
{
  std::string step;
  double ms = 0.0;
};

struct ClusterStats
{
  std::size_t count = 0;  // N_c of the final local window
  std::size_t mu_iterations = 0;
  std::size_t sigma_iterations = 0;
  bool mu_converged = false;
  bool sigma_converged = false;
};

struct RunReport
{
  std::vector<StepTiming> timings;  // one entry per step, in execution order
  std::size_t seeds = 0;
  std::size_t seeds_after_prune = 0;
  std::size_t clusters = 0;
  std::vector<ClusterStats> per_cluster;
  std::size_t dropped_p = 0;
  std::size_t dropped_pct = 0;
  std::size_t dropped_s = 0;

  double total_ms() const
  {
    double t = 0.0;
    for (const auto& s : timings)
    {
      t += s.ms;
    }
    return t;
  }

  double step_ms(const std::string& name) const
  {
    for (const auto& s : timings)
    {
      if (s.step == name)
      {
        return s.ms;
      }
    }
    return 0.0;
  }
};

struct ClusterResult
{
  std::vector<GaussianModel> models;
  Labeling labeling;
  RunReport report;
};

namespace detail
{

class StepClock
{
public:
  explicit StepClock(RunReport& report) : report_(report) {}

  void lap(std::string step)
  {
    const auto now = std::chrono::steady_clock::now();
    report_.timings.push_back(
        {std::move(step),
         std::chrono::duration<double, std::milli>(now - last_).count()});
    last_ = now;
  }

private:
  RunReport& report_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// Runs the full clustering: index, seed, converge, fit, assign, filter.
/// Results are identical for every thread count.
inline ClusterResult run(const PointSet& points, const ClusterConfig& config)
{
  config.validate();
  const SeedParams seed = config.seed_params();
  const FitParams fit = config.fit_params();
  const std::size_t threads = seed.threads;

  ClusterResult result;
  RunReport& report = result.report;
  detail::StepClock clock(report);

  const SpatialIndex index(points);
  clock.lap("index");

  auto centroids = seed_grid(index, config.d_s, config.max_seeds, threads);
  report.seeds = centroids.size();
  centroids = prune_low_count(std::move(centroids), config.min_count);
  report.seeds_after_prune = centroids.size();
  clock.lap("seed");
  if (centroids.empty())
  {
    throw NoClustersError("no clusters found; decrease L or adjust d_s");
  }

  centroids = converge_all(std::move(centroids), points, index, seed);
  report.clusters = centroids.size();
  clock.lap("converge");

  result.models.resize(centroids.size());
  parallel_for(centroids.size(), threads, [&](std::size_t c) {
    result.models[c] = fit_covariance(centroids[c].members, points, centroids[c].mu, fit);
  });
  for (std::size_t c = 0; c < centroids.size(); ++c)
  {
    report.per_cluster.push_back({centroids[c].count(), centroids[c].iterations,
                                  result.models[c].iterations,
                                  centroids[c].converged,
                                  result.models[c].converged});
  }
  clock.lap("fit");

  result.labeling = assign_all(points, result.models, config.density_form, threads);
  clock.lap("assign");

  const FilterParams& f = config.filters;
  if (f.l_p)
  {
    report.dropped_p = filter_pvalue(result.labeling, *f.l_p);
  }
  if (f.l_pct)
  {
    report.dropped_pct = filter_percent(result.labeling, *f.l_pct);
  }
  if (f.l_s)
  {
    report.dropped_s = filter_separation(result.labeling, *f.l_s);
  }
  clock.lap("filter");
  return result;
}

/// Heuristic starting value for d_s: the median non-zero per-axis span
/// divided by 20. It knows nothing about the actual cluster layout; a good
/// d_s sits just under half the smallest distance between cluster centers.
inline double suggest_ds(const PointSet& points)
{
  std::vector<double> spans;
  for (std::size_t a = 0; a < points.dim(); ++a)
  {
    double lo = points[0][a];
    double hi = lo;
    for (PointId i = 1; i < points.size(); ++i)
    {
      lo = std::min(lo, points[i][a]);
      hi = std::max(hi, points[i][a]);
    }
    if (hi > lo)
    {
      spans.push_back(hi - lo);
    }
  }
  if (spans.empty())
  {
    return 1.0;
  }
  std::sort(spans.begin(), spans.end());
  const std::size_t mid = spans.size() / 2;
  const double median = spans.size() % 2 == 1
                            ? spans[mid]
                            : 0.5 * (spans[mid - 1] + spans[mid]);
  return median / 20.0;
}

}  // namespace lgc
