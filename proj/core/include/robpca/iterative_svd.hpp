#pragma once

//
// Iterative SVD with outlier batch removal. Each round either discards the
// m columns with the largest residual against the current space, or
// replaces the space by a larger SVD space of the surviving columns; the
// uncaptured mass mu must then drop to at most (mu + xi) / 2. A round
// without that drop proves the guess xi is below the optimum and the run
// reports FAIL.
//

#include "robpca/matrix.hpp"
#include "robpca/oracle.hpp"

#include <vector>

namespace robpca {

enum class SolveStatus { success, fail };

const char* to_string(SolveStatus s);

struct IterSvdState {
  Index round = 0;
  Subspace space;
  std::vector<Index> inliers;  // sorted original column indices
  double mu = 0.0;             // squared residual of inliers against space
  Index svd_rounds = 0;
};

struct IterSvdOutcome {
  SolveStatus status = SolveStatus::fail;
  Subspace space;
  Partition part;
  Index rounds = 0;
  Index svd_rounds = 0;
  double xi = 0.0;
  std::vector<double> mu_trace;
  // ceil(log2(||A||_F^2 / (epsilon * xi))) and whether the outlier count and
  // space dimension stay within m and k times that value.
  Index round_bound = 0;
  bool count_bounds_hold = false;
};

// Relative slack on the per-round mass-drop test.
inline constexpr double kDropSlack = 1e-9;

IterSvdState initial_state(const DenseMatrix& a);

// One round. Caller guarantees state.mu >= (1 + epsilon) * xi.
IterSvdState iterative_svd_step(const IterSvdState& state, const DenseMatrix& a, Index k, Index m,
                                double xi);

// Runs rounds until mu < (1 + epsilon) * xi. xi <= 0 is accepted only with
// zero_detected, in which case the 2^-60 * ||A||_F^2 floor stands in for it.
IterSvdOutcome iterative_svd(const DenseMatrix& a, Index k, Index m, double epsilon, double xi,
                             bool zero_detected = false);

struct IterSvdSweep {
  IterSvdOutcome best;
  GuessLadder ladder;
  std::vector<double> failed_guesses;
};

// Tries every ladder value in ascending order and keeps the first (smallest)
// successful guess. Throws SweepFailure if none succeeds.
IterSvdSweep iterative_svd_sweep(const DenseMatrix& a, Index k, Index m, double epsilon);

}  // namespace robpca
