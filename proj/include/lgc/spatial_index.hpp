#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lgc/types.hpp"

namespace lgc
{

/// Static K-dimensional R-tree, bulk loaded with sort-tile-recursive packing.
///
/// The tree keeps its own copy of the coordinates in leaf order so that leaf
/// scans are contiguous. It is immutable after construction; concurrent
/// queries from several threads are safe.
class SpatialIndex
{
public:
  static constexpr std::size_t kDefaultNodeCapacity = 16;

  explicit SpatialIndex(const PointSet& points,
                        std::size_t node_capacity = kDefaultNodeCapacity)
      : k_(points.dim()), n_(points.size()), capacity_(node_capacity)
  {
    if (n_ == 0)
    {
      throw IngestionError("cannot index an empty point set");
    }
    if (capacity_ < 2)
    {
      throw ConfigError("node capacity must be >= 2");
    }
    compute_bounds(points);
    pack_leaves(points);
    while (levels_.back().size() > 1)
    {
      pack_parents();
    }
  }

  std::size_t size() const { return n_; }
  std::size_t dim() const { return k_; }
  const Bounds& bounds() const { return bounds_; }
  std::size_t height() const { return levels_.size(); }

  /// Ids of every point inside the closed box, ascending.
  std::vector<PointId> range_query(const AxisBox& box) const
  {
    std::vector<PointId> out;
    visit(box, [&](PointId id, std::span<const double>) { out.push_back(id); });
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t count_in_box(const AxisBox& box) const
  {
    check_box(box);
    std::size_t total = 0;
    std::vector<Ref> stack{{levels_.size() - 1, 0}};
    while (!stack.empty())
    {
      const Ref ref = stack.back();
      stack.pop_back();
      const Level& level = levels_[ref.level];
      const double* nb = level.box(ref.node, k_);
      if (!intersects(nb, box))
      {
        continue;
      }
      if (inside(nb, box))
      {
        total += level.count[ref.node];
        continue;
      }
      if (ref.level == 0)
      {
        for (std::size_t e = level.begin[ref.node]; e < level.end[ref.node]; ++e)
        {
          total += box.contains(entry(e)) ? 1 : 0;
        }
        continue;
      }
      for (std::size_t c = level.begin[ref.node]; c < level.end[ref.node]; ++c)
      {
        stack.push_back({ref.level - 1, c});
      }
    }
    return total;
  }

  /// Calls `f(id, coords)` for every point in the box. Visit order follows
  /// the tree layout, not id order.
  template <class Visitor>
  void visit(const AxisBox& box, Visitor&& f) const
  {
    check_box(box);
    std::vector<Ref> stack{{levels_.size() - 1, 0}};
    while (!stack.empty())
    {
      const Ref ref = stack.back();
      stack.pop_back();
      const Level& level = levels_[ref.level];
      if (!intersects(level.box(ref.node, k_), box))
      {
        continue;
      }
      if (ref.level == 0)
      {
        for (std::size_t e = level.begin[ref.node]; e < level.end[ref.node]; ++e)
        {
          const auto p = entry(e);
          if (box.contains(p))
          {
            f(ids_[e], p);
          }
        }
        continue;
      }
      for (std::size_t c = level.begin[ref.node]; c < level.end[ref.node]; ++c)
      {
        stack.push_back({ref.level - 1, c});
      }
    }
  }

private:
  struct Ref
  {
    std::size_t level;
    std::size_t node;
  };

  // One tree level. Children of node i are [begin[i], end[i]) in the level
  // below, or in the entry arrays for the leaf level.
  struct Level
  {
    std::vector<std::size_t> begin;
    std::vector<std::size_t> end;
    std::vector<std::size_t> count;
    std::vector<double> boxes;  // 2K per node: min[0..K), max[0..K)

    std::size_t size() const { return begin.size(); }
    const double* box(std::size_t i, std::size_t k) const
    {
      return boxes.data() + 2 * k * i;
    }
  };

  std::span<const double> entry(std::size_t e) const
  {
    return {coords_.data() + e * k_, k_};
  }

  void check_box(const AxisBox& box) const
  {
    if (box.center.size() != k_)
    {
      throw ConfigError("query box has dimension " +
                        std::to_string(box.center.size()) + ", index has " +
                        std::to_string(k_));
    }
    if (!(box.half_width > 0.0))
    {
      throw ConfigError("query box half width must be positive");
    }
  }

  // Conservative under rounding: uses the same subtraction the point
  // predicate uses, and fl(p - c) is monotone in p.
  bool intersects(const double* nb, const AxisBox& box) const
  {
    for (std::size_t a = 0; a < k_; ++a)
    {
      const double c = box.center[a];
      double gap = 0.0;
      if (nb[a] > c)
      {
        gap = nb[a] - c;
      }
      else if (nb[k_ + a] < c)
      {
        gap = c - nb[k_ + a];
      }
      if (gap > box.half_width)
      {
        return false;
      }
    }
    return true;
  }

  bool inside(const double* nb, const AxisBox& box) const
  {
    for (std::size_t a = 0; a < k_; ++a)
    {
      const double c = box.center[a];
      if (!(std::abs(nb[a] - c) <= box.half_width &&
            std::abs(nb[k_ + a] - c) <= box.half_width))
      {
        return false;
      }
    }
    return true;
  }

  void compute_bounds(const PointSet& points)
  {
    bounds_.min.assign(k_, std::numeric_limits<double>::infinity());
    bounds_.max.assign(k_, -std::numeric_limits<double>::infinity());
    for (PointId i = 0; i < n_; ++i)
    {
      const auto p = points[i];
      for (std::size_t a = 0; a < k_; ++a)
      {
        bounds_.min[a] = std::min(bounds_.min[a], p[a]);
        bounds_.max[a] = std::max(bounds_.max[a], p[a]);
      }
    }
  }

  // Sort-tile-recursive ordering of `perm[first, last)` by the item centers
  // returned from `center(item, axis)`, starting at `axis`.
  template <class Center>
  void str_order(std::vector<std::size_t>& perm, std::size_t first,
                 std::size_t last, std::size_t axis, const Center& center) const
  {
    const auto by_axis = [&](std::size_t lhs, std::size_t rhs) {
      const double cl = center(lhs, axis);
      const double cr = center(rhs, axis);
      return cl < cr || (cl == cr && lhs < rhs);
    };
    const std::size_t count = last - first;
    std::sort(perm.begin() + first, perm.begin() + last, by_axis);
    if (axis + 1 == k_ || count <= capacity_)
    {
      return;
    }
    const double pages = std::ceil(double(count) / double(capacity_));
    const double slices =
        std::ceil(std::pow(pages, 1.0 / double(k_ - axis)) - 1e-9);
    const std::size_t slab =
        capacity_ * std::size_t(std::ceil(pages / std::max(1.0, slices)));
    for (std::size_t b = first; b < last; b += slab)
    {
      str_order(perm, b, std::min(last, b + slab), axis + 1, center);
    }
  }

  void pack_leaves(const PointSet& points)
  {
    std::vector<std::size_t> perm(n_);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    str_order(perm, 0, n_, 0,
              [&](std::size_t i, std::size_t a) { return points[i][a]; });

    ids_.resize(n_);
    coords_.resize(n_ * k_);
    for (std::size_t e = 0; e < n_; ++e)
    {
      ids_[e] = perm[e];
      const auto p = points[perm[e]];
      std::copy(p.begin(), p.end(), coords_.begin() + e * k_);
    }

    Level leaves;
    for (std::size_t b = 0; b < n_; b += capacity_)
    {
      const std::size_t e = std::min(n_, b + capacity_);
      leaves.begin.push_back(b);
      leaves.end.push_back(e);
      leaves.count.push_back(e - b);
      std::vector<double> box(2 * k_);
      for (std::size_t a = 0; a < k_; ++a)
      {
        box[a] = std::numeric_limits<double>::infinity();
        box[k_ + a] = -std::numeric_limits<double>::infinity();
      }
      for (std::size_t i = b; i < e; ++i)
      {
        const auto p = entry(i);
        for (std::size_t a = 0; a < k_; ++a)
        {
          box[a] = std::min(box[a], p[a]);
          box[k_ + a] = std::max(box[k_ + a], p[a]);
        }
      }
      leaves.boxes.insert(leaves.boxes.end(), box.begin(), box.end());
    }
    levels_.push_back(std::move(leaves));
  }

  void pack_parents()
  {
    Level& children = levels_.back();
    const std::size_t m = children.size();
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    str_order(perm, 0, m, 0, [&](std::size_t i, std::size_t a) {
      const double* b = children.box(i, k_);
      return 0.5 * (b[a] + b[k_ + a]);
    });

    Level sorted;
    for (const std::size_t i : perm)
    {
      sorted.begin.push_back(children.begin[i]);
      sorted.end.push_back(children.end[i]);
      sorted.count.push_back(children.count[i]);
      const double* b = children.box(i, k_);
      sorted.boxes.insert(sorted.boxes.end(), b, b + 2 * k_);
    }
    children = std::move(sorted);

    Level parents;
    for (std::size_t b = 0; b < m; b += capacity_)
    {
      const std::size_t e = std::min(m, b + capacity_);
      parents.begin.push_back(b);
      parents.end.push_back(e);
      std::size_t count = 0;
      std::vector<double> box(children.box(b, k_), children.box(b, k_) + 2 * k_);
      for (std::size_t c = b; c < e; ++c)
      {
        count += children.count[c];
        const double* cb = children.box(c, k_);
        for (std::size_t a = 0; a < k_; ++a)
        {
          box[a] = std::min(box[a], cb[a]);
          box[k_ + a] = std::max(box[k_ + a], cb[k_ + a]);
        }
      }
      parents.count.push_back(count);
      parents.boxes.insert(parents.boxes.end(), box.begin(), box.end());
    }
    levels_.push_back(std::move(parents));
  }

  std::size_t k_;
  std::size_t n_;
  std::size_t capacity_;
  Bounds bounds_;
  std::vector<PointId> ids_;
  std::vector<double> coords_;
  std::vector<Level> levels_;
};

}  // namespace lgc
