#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgc
{

using PointId = std::size_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Bad or missing input data (empty set, non-finite values, malformed files).
class IngestionError : public Error
{
public:
  explicit IngestionError(const std::string& what, std::size_t row = 0)
      : Error(what), row_(row) {}

  /// 1-based row the problem was found on, or 0 when not row specific.
  std::size_t row() const { return row_; }

private:
  std::size_t row_;
};

/// Invalid parameters or mismatched dimensions.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Every candidate centroid was pruned or died during convergence.
class NoClustersError : public Error
{
public:
  using Error::Error;
};

/// N points of dimension K stored row-major.
class PointSet
{
public:
  PointSet() = default;

  /// Takes ownership of `coords` (row-major, size n*k). Rejects empty input
  /// and non-finite values; the reported row is 1-based.
  PointSet(std::vector<double> coords, std::size_t k)
      : coords_(std::move(coords)), k_(k)
  {
    if (k_ == 0)
    {
      throw IngestionError("point dimension must be >= 1");
    }
    if (coords_.empty())
    {
      throw IngestionError("point set is empty");
    }
    if (coords_.size() % k_ != 0)
    {
      throw IngestionError("coordinate count is not a multiple of the dimension");
    }
    n_ = coords_.size() / k_;
    for (std::size_t i = 0; i < coords_.size(); ++i)
    {
      if (!std::isfinite(coords_[i]))
      {
        throw IngestionError("non-finite coordinate in row " +
                                 std::to_string(i / k_ + 1),
                             i / k_ + 1);
      }
    }
  }

  static PointSet from_rows(const std::vector<std::vector<double>>& rows)
  {
    if (rows.empty())
    {
      throw IngestionError("point set is empty");
    }
    const std::size_t k = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * k);
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
      if (rows[i].size() != k)
      {
        throw IngestionError("ragged row " + std::to_string(i + 1), i + 1);
      }
      coords.insert(coords.end(), rows[i].begin(), rows[i].end());
    }
    return PointSet(std::move(coords), k);
  }

  std::size_t size() const { return n_; }
  std::size_t dim() const { return k_; }

  std::span<const double> operator[](PointId i) const
  {
    return {coords_.data() + i * k_, k_};
  }

  std::span<const double> coords() const { return coords_; }

  /// Copy with every point shifted by `offset`.
  PointSet translated(std::span<const double> offset) const
  {
    std::vector<double> out = coords_;
    for (std::size_t i = 0; i < out.size(); ++i)
    {
      out[i] += offset[i % k_];
    }
    return PointSet(std::move(out), k_);
  }

private:
  std::vector<double> coords_;
  std::size_t n_ = 0;
  std::size_t k_ = 0;
};

/// Per-axis extremes of a point set.
struct Bounds
{
  std::vector<double> min;
  std::vector<double> max;

  std::size_t dim() const { return min.size(); }
};

/// Closed axis-aligned cube: p is inside iff |p[a] - center[a]| <= half_width
/// on every axis.
struct AxisBox
{
  std::vector<double> center;
  double half_width = 0.0;

  bool contains(std::span<const double> p) const
  {
    for (std::size_t a = 0; a < center.size(); ++a)
    {
      if (!(std::abs(p[a] - center[a]) <= half_width))
      {
        return false;
      }
    }
    return true;
  }
};

}  // namespace lgc
