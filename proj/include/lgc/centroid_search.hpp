#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lgc/parallel.hpp"
#include "lgc/spatial_index.hpp"
#include "lgc/types.hpp"

namespace lgc
{

/// A candidate cluster center and its local window contents.
struct Centroid
{
  std::size_t id = 0;
  std::vector<double> mu;
  std::vector<PointId> members;  // ascending ids inside the window at mu
  bool alive = true;
  bool converged = false;
  std::size_t iterations = 0;

  std::size_t count() const { return members.size(); }
};

struct SeedParams
{
  double d_s = 1.0;            // lattice pitch and window side
  std::size_t min_count = 0;   // seeds with fewer local points are pruned
  double epsilon = 0.01;       // stop when a centroid moves less than this
  std::size_t max_iter = 100;  // per-centroid cap on mean updates
  std::size_t max_seeds = 10'000'000;
  std::size_t threads = 1;

  void validate() const
  {
    if (!(d_s > 0.0) || !std::isfinite(d_s))
    {
      throw ConfigError("d_s must be a positive finite number");
    }
    if (!(epsilon > 0.0))
    {
      throw ConfigError("centroid epsilon must be positive");
    }
    if (max_iter < 1)
    {
      throw ConfigError("centroid max_iter must be >= 1");
    }
  }
};

/// The local window of side d_s around `mu`.
inline AxisBox window_at(std::span<const double> mu, double d_s)
{
  return AxisBox{std::vector<double>(mu.begin(), mu.end()), 0.5 * d_s};
}

/// Lattice nodes min[a] + j*d_s, j = 0..ceil(span/d_s), per axis. Returned
/// row-major (last axis varies fastest), one K-vector per node.
inline std::vector<std::vector<double>> lattice(
    const Bounds& bounds, double d_s, std::size_t max_seeds = 10'000'000)
{
  if (!(d_s > 0.0))
  {
    throw ConfigError("d_s must be positive");
  }
  const std::size_t k = bounds.dim();
  std::vector<std::size_t> per_axis(k);
  double total = 1.0;
  for (std::size_t a = 0; a < k; ++a)
  {
    const double steps = std::ceil((bounds.max[a] - bounds.min[a]) / d_s);
    total *= steps + 1.0;
    if (total > double(max_seeds))
    {
      throw ConfigError("seed lattice would exceed " +
                        std::to_string(max_seeds) +
                        " nodes; use a larger d_s");
    }
    per_axis[a] = std::size_t(steps) + 1;
  }

  std::vector<std::vector<double>> nodes;
  nodes.reserve(std::size_t(total));
  std::vector<std::size_t> j(k, 0);
  for (;;)
  {
    std::vector<double> node(k);
    for (std::size_t a = 0; a < k; ++a)
    {
      node[a] = bounds.min[a] + double(j[a]) * d_s;
    }
    nodes.push_back(std::move(node));
    std::size_t a = k;
    while (a > 0)
    {
      --a;
      if (++j[a] < per_axis[a])
      {
        break;
      }
      j[a] = 0;
      if (a == 0)
      {
        return nodes;
      }
    }
  }
}

/// Places one seed per lattice node and collects its window members.
inline std::vector<Centroid> seed_grid(const SpatialIndex& index, double d_s,
                                       std::size_t max_seeds = 10'000'000,
                                       std::size_t threads = 1)
{
  auto nodes = lattice(index.bounds(), d_s, max_seeds);
  std::vector<Centroid> seeds(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t s) {
    Centroid& c = seeds[s];
    c.id = s;
    c.mu = std::move(nodes[s]);
    c.members = index.range_query(window_at(c.mu, d_s));
  });
  return seeds;
}

/// Drops seeds with count < min_count. Empty seeds are always dropped.
inline std::vector<Centroid> prune_low_count(std::vector<Centroid> centroids,
                                             std::size_t min_count)
{
  std::erase_if(centroids, [&](const Centroid& c) {
    return c.count() == 0 || c.count() < min_count;
  });
  return centroids;
}

/// One mean-shift step: moves the centroid to the mean of its current
/// members, then refreshes members at the new position. Returns the
/// Euclidean distance moved. A centroid whose new window is empty dies.
inline double update_centroid(Centroid& c, const PointSet& points,
                              const SpatialIndex& index, double d_s)
{
  const std::size_t k = c.mu.size();
  std::vector<double> next(k, 0.0);
  for (const PointId i : c.members)
  {
    const auto p = points[i];
    for (std::size_t a = 0; a < k; ++a)
    {
      next[a] += p[a];
    }
  }
  const double inv = 1.0 / double(c.members.size());
  double shift = 0.0;
  for (std::size_t a = 0; a < k; ++a)
  {
    next[a] *= inv;
    shift += (next[a] - c.mu[a]) * (next[a] - c.mu[a]);
  }
  c.mu = std::move(next);
  c.members = index.range_query(window_at(c.mu, d_s));
  ++c.iterations;
  if (c.members.empty())
  {
    c.alive = false;
  }
  return std::sqrt(shift);
}

/// True iff b lies strictly inside the side-2*d_s collision box around a.
inline bool collides(const Centroid& a, const Centroid& b, double d_s)
{
  for (std::size_t m = 0; m < a.mu.size(); ++m)
  {
    if (!(std::abs(a.mu[m] - b.mu[m]) < d_s))
    {
      return false;
    }
  }
  return true;
}

/// Kills colliding centroids until no alive pair collides. Centroids are
/// visited by priority (higher count first, then lower id); one dies if it
/// collides with any already-kept centroid. The outcome does not depend on
/// the order of `centroids`.
inline void resolve_collisions(std::vector<Centroid>& centroids, double d_s)
{
  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < centroids.size(); ++i)
  {
    if (centroids[i].alive)
    {
      alive.push_back(i);
    }
  }
  if (alive.size() < 2)
  {
    return;
  }

  // Sweep along axis 0 to find candidate pairs.
  std::vector<std::size_t> by_x = alive;
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t l, std::size_t r) {
    const double xl = centroids[l].mu[0];
    const double xr = centroids[r].mu[0];
    return xl < xr || (xl == xr && centroids[l].id < centroids[r].id);
  });
  std::vector<std::vector<std::size_t>> neighbours(centroids.size());
  for (std::size_t p = 0; p < by_x.size(); ++p)
  {
    const Centroid& a = centroids[by_x[p]];
    for (std::size_t q = p + 1; q < by_x.size(); ++q)
    {
      const Centroid& b = centroids[by_x[q]];
      if (!(b.mu[0] - a.mu[0] < d_s))
      {
        break;
      }
      if (collides(a, b, d_s))
      {
        neighbours[by_x[p]].push_back(by_x[q]);
        neighbours[by_x[q]].push_back(by_x[p]);
      }
    }
  }

  std::sort(alive.begin(), alive.end(), [&](std::size_t l, std::size_t r) {
    const auto nl = centroids[l].count();
    const auto nr = centroids[r].count();
    return nl > nr || (nl == nr && centroids[l].id < centroids[r].id);
  });
  std::vector<char> kept(centroids.size(), 0);
  for (const std::size_t i : alive)
  {
    const bool blocked =
        std::any_of(neighbours[i].begin(), neighbours[i].end(),
                    [&](std::size_t j) { return kept[j] != 0; });
    if (blocked)
    {
      centroids[i].alive = false;
    }
    else
    {
      kept[i] = 1;
    }
  }
}

/// Iterates all centroids to their local means, removing collisions after
/// every sweep, until each survivor has converged or hit max_iter. Returns
/// the survivors in id order.
inline std::vector<Centroid> converge_all(std::vector<Centroid> centroids,
                                          const PointSet& points,
                                          const SpatialIndex& index,
                                          const SeedParams& params)
{
  params.validate();
  for (;;)
  {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < centroids.size(); ++i)
    {
      const Centroid& c = centroids[i];
      if (c.alive && !c.converged && c.iterations < params.max_iter)
      {
        active.push_back(i);
      }
    }
    if (active.empty())
    {
      break;
    }
    parallel_for(active.size(), params.threads, [&](std::size_t s) {
      Centroid& c = centroids[active[s]];
      const double shift = update_centroid(c, points, index, params.d_s);
      c.converged = c.alive && shift < params.epsilon;
    });
    resolve_collisions(centroids, params.d_s);
  }

  std::erase_if(centroids, [](const Centroid& c) { return !c.alive; });
  if (centroids.empty())
  {
    throw NoClustersError(
        "no clusters found; decrease L or adjust d_s");
  }
  std::sort(centroids.begin(), centroids.end(),
            [](const Centroid& l, const Centroid& r) { return l.id < r.id; });
  return centroids;
}

}  // namespace lgc
