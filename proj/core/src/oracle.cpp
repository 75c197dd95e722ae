#include "robpca/oracle.hpp"

#include "ordering.hpp"
#include "robpca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace robpca {

Partition Partition::from_outliers(Index n, std::vector<Index> outliers) {
  if (n < 0) throw ParameterError("partition size must be nonnegative");
  std::sort(outliers.begin(), outliers.end());
  if (std::adjacent_find(outliers.begin(), outliers.end()) != outliers.end()) {
    throw ParameterError("duplicate outlier index");
  }
  if (!outliers.empty() && (outliers.front() < 0 || outliers.back() >= n)) {
    throw ParameterError("outlier index out of range");
  }
  Partition p;
  p.n_ = n;
  p.inliers_.reserve(static_cast<std::size_t>(n) - outliers.size());
  auto it = outliers.begin();
  for (Index i = 0; i < n; ++i) {
    if (it != outliers.end() && *it == i) {
      ++it;
    } else {
      p.inliers_.push_back(i);
    }
  }
  p.outliers_ = std::move(outliers);
  return p;
}

void SolveParams::validate(Index n) const {
  if (k < 0) throw ParameterError("k must be nonnegative");
  if (m < 0) throw ParameterError("m must be nonnegative");
  if (n >= 0 && m > n) throw ParameterError("m exceeds the number of columns");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("p must be >= 1");
}

SquaredError objective_error(const DenseMatrix& a, const Partition& part, Index k) {
  if (part.n() != a.cols()) throw ParameterError("partition does not match matrix width");
  if (k < 0) throw ParameterError("k must be nonnegative");
  const auto& in = part.inliers();
  if (in.empty()) return SquaredError(0.0);
  const DenseMatrix b = a.select_columns(in);
  return best_rank_k(b, std::min({k, b.rows(), b.cols()})).error;
}

std::uint64_t binomial(Index n, Index r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (Index i = 1; i <= r; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - r + i) / static_cast<unsigned __int128>(i);
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

namespace {

// Advances `comb` (strictly increasing, values < n) to its lexicographic successor.
bool next_combination(std::vector<Index>& comb, Index n) {
  const auto r = static_cast<Index>(comb.size());
  Index i = r - 1;
  while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - r + i) --i;
  if (i < 0) return false;
  ++comb[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < r; ++j) {
    comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

}  // namespace

OracleResult brute_force_opt(const DenseMatrix& a, Index k, Index m, std::uint64_t guard) {
  const Index n = a.cols();
  if (k < 0) throw ParameterError("k must be nonnegative");
  if (m < 0 || m > n) throw ParameterError("m must lie in [0, n]");
  const std::uint64_t count = binomial(n, m);
  if (count > guard) {
    throw SizeError("brute force needs C(" + std::to_string(n) + ", " + std::to_string(m) +
                    ") evaluations, above the guard of " + std::to_string(guard));
  }

  std::vector<Index> comb(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) comb[static_cast<std::size_t>(i)] = i;

  OracleResult best{Partition::from_outliers(n, comb), objective_error(a, Partition::from_outliers(n, comb), k), 1};
  while (next_combination(comb, n)) {
    Partition part = Partition::from_outliers(n, comb);
    const SquaredError err = objective_error(a, part, k);
    ++best.evaluated;
    if (err < best.opt) {
      best.opt = err;
      best.part = std::move(part);
    }
  }

  // Putting any single outlier back must not lower the error; otherwise
  // restricting to size-exactly-m sets would be unsound.
  const double slack = 1e-9 * a.squared_norm() + 1e-300;
  for (Index removed : best.part.outliers()) {
    std::vector<Index> fewer;
    for (Index o : best.part.outliers()) {
      if (o != removed) fewer.push_back(o);
    }
    const SquaredError e = objective_error(a, Partition::from_outliers(n, fewer), k);
    if (e.value() + slack < best.opt.value()) {
      throw std::logic_error("brute_force_opt: err_k increased after removing a column");
    }
  }
  return best;
}

GuessLadder guess_ladder(double lower, double upper, double epsilon) {
  if (!(lower > 0.0) || !(upper > 0.0) || !std::isfinite(lower) || !std::isfinite(upper)) {
    throw ParameterError("ladder bounds must be positive and finite");
  }
  if (lower > upper) throw ParameterError("ladder lower bound exceeds upper bound");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ParameterError("epsilon must be positive");
  const double ratio = 1.0 + epsilon;
  GuessLadder ladder;
  double v = lower;
  ladder.values.push_back(v);
  while (v < upper) {
    v *= ratio;
    ladder.values.push_back(v);
  }
  return ladder;
}

LadderBounds ladder_bounds(const DenseMatrix& a, Index k, Index m) {
  if (k < 0 || m < 0) throw ParameterError("k and m must be nonnegative");
  LadderBounds b;
  const double mass = a.squared_norm();
  b.upper = mass;
  b.lower = std::max(mass * std::ldexp(1.0, -60), std::numeric_limits<double>::min());
  b.upper = std::max(b.upper, b.lower);

  const Index n = a.cols();
  if (mass == 0.0 || n - std::min(m, n) <= k) {
    b.zero_detected = true;
    return b;
  }
  const Index kk = std::min({k, a.rows(), n});
  const Subspace space = best_rank_k(a, kk).space;
  const std::vector<double> res = residual_sq_norms(a, space);
  std::vector<Index> drop = detail::largest_positions(res, m);
  std::sort(drop.begin(), drop.end());
  const Partition part = Partition::from_outliers(n, drop);
  const DenseMatrix rest = a.select_columns(part.inliers());
  b.zero_detected = numerical_rank(rest) <= k;
  return b;
}

double condition_number(const DenseMatrix& a, const Partition& inlier_part, Index k) {
  const double denom = objective_error(a, inlier_part, k).value();
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return a.squared_norm() / denom;
}

}  // namespace robpca
