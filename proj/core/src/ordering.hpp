#pragma once

#include "robpca/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace robpca::detail {

// Positions of the `count` largest values; ties go to the smaller position.
inline std::vector<Index> largest_positions(const std::vector<double>& values, Index count) {
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(std::max<Index>(count, 0)), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](Index a, Index b) {
                      const double va = values[static_cast<std::size_t>(a)];
                      const double vb = values[static_cast<std::size_t>(b)];
                      return va != vb ? va > vb : a < b;
                    });
  order.resize(take);
  return order;
}

// Positions of the `count` smallest values; ties go to the smaller position.
inline std::vector<Index> smallest_positions(const std::vector<double>& values, Index count) {
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(std::max<Index>(count, 0)), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](Index a, Index b) {
                      const double va = values[static_cast<std::size_t>(a)];
                      const double vb = values[static_cast<std::size_t>(b)];
                      return va != vb ? va < vb : a < b;
                    });
  order.resize(take);
  return order;
}

}  // namespace robpca::detail
