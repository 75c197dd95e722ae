#pragma once

#include "robpca/matrix.hpp"

#include <cstdint>
#include <vector>

namespace robpca {

// Disjoint inlier/outlier split of the column index range [0, n).
class Partition {
 public:
  Partition() = default;
  // Outliers need not be sorted; duplicates and out-of-range indices throw.
  static Partition from_outliers(Index n, std::vector<Index> outliers);
  static Partition all_inliers(Index n) { return from_outliers(n, {}); }

  Index n() const { return n_; }
  const std::vector<Index>& inliers() const { return inliers_; }
  const std::vector<Index>& outliers() const { return outliers_; }

  bool operator==(const Partition&) const = default;

 private:
  Index n_ = 0;
  std::vector<Index> inliers_;
  std::vector<Index> outliers_;
};

struct SolveParams {
  Index k = 1;
  Index m = 0;
  double epsilon = 0.5;
  double delta = 0.5;
  double p = 2.0;
  std::uint64_t seed = 0;

  // Throws ParameterError when a field is out of range; n < 0 skips the m <= n check.
  void validate(Index n = -1) const;
};

struct GuessLadder {
  std::vector<double> values;  // ascending, ratio (1 + epsilon)
  bool includes_zero = false;
};

struct LadderBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool zero_detected = false;
};

struct OracleResult {
  Partition part;
  SquaredError opt;
  std::uint64_t evaluated = 0;
};

// err_k of the inlier submatrix; k is clipped to min(d, |inliers|).
SquaredError objective_error(const DenseMatrix& a, const Partition& part, Index k);

inline constexpr std::uint64_t kBruteForceGuard = 1'000'000;

std::uint64_t binomial(Index n, Index r);

// Exact minimiser over all outlier sets of size exactly m (lexicographic
// tie-break). Throws SizeError when C(n, m) exceeds `guard`.
OracleResult brute_force_opt(const DenseMatrix& a, Index k, Index m,
                             std::uint64_t guard = kBruteForceGuard);

// lower * (1 + epsilon)^j for j = 0, 1, ... until the value reaches upper.
GuessLadder guess_ladder(double lower, double upper, double epsilon);

// Range [lower, upper] for the optimum of (k, m) plus a greedy one-sided
// test for a zero optimum.
LadderBounds ladder_bounds(const DenseMatrix& a, Index k, Index m);

// Lambda_k = ||A||_F^2 / err_k(inliers); +infinity when the denominator is 0.
double condition_number(const DenseMatrix& a, const Partition& inlier_part, Index k);

}  // namespace robpca
