#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lgc/testkit/blobs.hpp"

namespace lgc::testkit
{

/// `clusters` unit-variance blobs sharing `total` points. Center i sits at
/// spacing * i on axis 0 and spacing * (i % 2) on axis 1, so neighbouring
/// centers are spacing * sqrt(2) apart when K >= 2.
inline std::vector<BlobSpec> zigzag_specs(std::size_t k, std::size_t clusters,
                                          std::size_t total, double spacing = 10.0,
                                          double stddev = 1.0)
{
  std::vector<BlobSpec> specs;
  for (std::size_t i = 0; i < clusters; ++i)
  {
    std::vector<double> mean(k, 0.0);
    mean[0] = spacing * double(i);
    if (k > 1)
    {
      mean[1] = spacing * double(i % 2);
    }
    const std::size_t count = total / clusters + (i < total % clusters ? 1 : 0);
    specs.push_back(BlobSpec::isotropic(std::move(mean), stddev, count));
  }
  return specs;
}

}  // namespace lgc::testkit
