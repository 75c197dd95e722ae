#include "robpca/iterative_svd.hpp"

#include "ordering.hpp"
#include "robpca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace robpca {

const char* to_string(SolveStatus s) {
  return s == SolveStatus::success ? "SUCCESS" : "FAIL";
}

namespace {

double residual_mass(const DenseMatrix& a, const std::vector<Index>& cols, const Subspace& space) {
  if (cols.empty()) return 0.0;
  const std::vector<double> r = residual_sq_norms(a.select_columns(cols), space);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

double xi_floor(const DenseMatrix& a) {
  return std::max(a.squared_norm() * std::ldexp(1.0, -60), std::numeric_limits<double>::min());
}

}  // namespace

IterSvdState initial_state(const DenseMatrix& a) {
  IterSvdState s;
  s.space = Subspace(a.rows());
  s.inliers.resize(static_cast<std::size_t>(a.cols()));
  std::iota(s.inliers.begin(), s.inliers.end(), Index{0});
  s.mu = a.squared_norm();
  return s;
}

IterSvdState iterative_svd_step(const IterSvdState& state, const DenseMatrix& a, Index k, Index m,
                                double xi) {
  const DenseMatrix sub = a.select_columns(state.inliers);
  const std::vector<double> res = residual_sq_norms(sub, state.space);
  const double mu = std::accumulate(res.begin(), res.end(), 0.0);

  const std::vector<Index> top = detail::largest_positions(res, m);
  double top_mass = 0.0;
  for (Index t : top) top_mass += res[static_cast<std::size_t>(t)];

  IterSvdState next;
  next.round = state.round + 1;
  next.svd_rounds = state.svd_rounds;
  if (top_mass >= 0.5 * (mu - xi)) {
    std::vector<char> drop(state.inliers.size(), 0);
    for (Index t : top) drop[static_cast<std::size_t>(t)] = 1;
    for (std::size_t i = 0; i < state.inliers.size(); ++i) {
      if (!drop[i]) next.inliers.push_back(state.inliers[i]);
    }
    next.space = state.space;
  } else {
    // Rank (j + 1) k with j the global round index, on the original columns.
    const Index rank = std::min({(state.round + 1) * k, sub.rows(), sub.cols()});
    next.space = best_rank_k(sub, rank).space;
    next.inliers = state.inliers;
    ++next.svd_rounds;
  }
  next.mu = residual_mass(a, next.inliers, next.space);
  return next;
}

IterSvdOutcome iterative_svd(const DenseMatrix& a, Index k, Index m, double epsilon, double xi,
                             bool zero_detected) {
  if (k < 0 || m < 0) throw ParameterError("k and m must be nonnegative");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
  if (!std::isfinite(xi)) throw ParameterError("xi must be finite");
  if (xi <= 0.0) {
    if (!zero_detected) throw ParameterError("xi must be positive unless a zero optimum was detected");
    xi = xi_floor(a);
  }

  IterSvdOutcome out;
  out.xi = xi;
  IterSvdState state = initial_state(a);
  out.mu_trace.push_back(state.mu);
  out.status = SolveStatus::success;

  while (state.mu >= (1.0 + epsilon) * xi) {
    IterSvdState next = iterative_svd_step(state, a, k, m, xi);
    const bool dropped = next.mu <= 0.5 * (state.mu + xi) + kDropSlack * state.mu;
    state = std::move(next);
    out.mu_trace.push_back(state.mu);
    if (!dropped) {
      out.status = SolveStatus::fail;
      break;
    }
  }

  out.rounds = state.round;
  out.svd_rounds = state.svd_rounds;
  out.space = state.space;
  std::vector<Index> outliers;
  {
    auto it = state.inliers.begin();
    for (Index i = 0; i < a.cols(); ++i) {
      if (it != state.inliers.end() && *it == i) {
        ++it;
      } else {
        outliers.push_back(i);
      }
    }
  }
  out.part = Partition::from_outliers(a.cols(), std::move(outliers));

  const double ratio = a.squared_norm() / (epsilon * xi);
  out.round_bound = ratio > 1.0 ? static_cast<Index>(std::ceil(std::log2(ratio))) : 0;
  out.count_bounds_hold = static_cast<Index>(out.part.outliers().size()) <= m * out.round_bound &&
                          out.space.dim() <= k * out.round_bound;
  return out;
}

IterSvdSweep iterative_svd_sweep(const DenseMatrix& a, Index k, Index m, double epsilon) {
  const LadderBounds bounds = ladder_bounds(a, k, m);
  IterSvdSweep sweep;
  sweep.ladder = guess_ladder(bounds.lower, bounds.upper, epsilon);
  sweep.ladder.includes_zero = bounds.zero_detected;
  for (double xi : sweep.ladder.values) {
    IterSvdOutcome outcome = iterative_svd(a, k, m, epsilon, xi);
    if (outcome.status == SolveStatus::success) {
      sweep.best = std::move(outcome);
      return sweep;
    }
    sweep.failed_guesses.push_back(xi);
  }
  throw SweepFailure("iterative SVD failed for every guess on the ladder");
}

}  // namespace robpca
