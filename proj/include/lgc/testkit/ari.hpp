#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lgc::testkit
{

/// Adjusted Rand index between two labelings. Points with a negative label
/// in either labeling are skipped. Two single-cluster partitions score 1.
inline double adjusted_rand(const std::vector<std::int64_t>& a,
                            const std::vector<std::int64_t>& b)
{
  if (a.size() != b.size())
  {
    throw std::invalid_argument("labelings differ in length");
  }
  std::map<std::pair<std::int64_t, std::int64_t>, double> table;
  std::map<std::int64_t, double> rows;
  std::map<std::int64_t, double> cols;
  double n = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    if (a[i] < 0 || b[i] < 0)
    {
      continue;
    }
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
    n += 1.0;
  }
  const auto pairs = [](double v) { return 0.5 * v * (v - 1.0); };
  double index = 0.0;
  for (const auto& [key, v] : table)
  {
    index += pairs(v);
  }
  double sum_rows = 0.0;
  for (const auto& [key, v] : rows)
  {
    sum_rows += pairs(v);
  }
  double sum_cols = 0.0;
  for (const auto& [key, v] : cols)
  {
    sum_cols += pairs(v);
  }
  const double total = pairs(n);
  if (total == 0.0)
  {
    return 1.0;
  }
  const double expected = sum_rows * sum_cols / total;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected)
  {
    return 1.0;
  }
  return (index - expected) / (maximum - expected);
}

}  // namespace lgc::testkit
