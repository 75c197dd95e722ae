#pragma once

#include "robpca/matrix.hpp"

#include <Eigen/Dense>

#include <random>

namespace testutil {

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  }
  return m;
}

// Exactly rank-k d x n matrix (generic factors).
inline Eigen::MatrixXd low_rank(Eigen::Index d, Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  return gaussian(d, k, seed) * gaussian(k, n, seed + 7777);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace testutil
