#pragma once

//
// Entry-wise l_p^p variant of SELECT. A column counts as covered when its
// optimal l_p^p reconstruction error from the sampled columns is at most
// 100 (k + 1) / n times the guess for the optimum; a round must cover at
// least a tenth of the N - m presumed inliers or it is resampled.
//

#include "robpca/oracle.hpp"
#include "robpca/sampling.hpp"

#include <Eigen/Dense>

namespace robpca {

// min_x ||u - C x||_p^p for p >= 1, by damped Newton on a smoothed objective
// with continuation, warm-started from least squares. Returned value is the
// true (unsmoothed) objective at the best iterate.
double lp_residual(const Eigen::VectorXd& u, const Eigen::MatrixXd& cols, double p);

// sum_ij |a_ij|^p.
double lp_mass(const DenseMatrix& a, double p);

// Sample size 2k, coverage threshold 100 (k + 1) theta / n.
SelectResult lp_select(const DenseMatrix& a, Index m, Index k, double delta, double p,
                       double theta_guess, Rng& rng);

// One draw of the l_p coverage event on outlier-free data: a uniform 2k
// sample covers at least ceil(n / 10) columns at threshold 100 (k + 1) theta / n.
bool lp_coverage_trial(const DenseMatrix& clean, Index k, double p, double theta, Rng& rng);

// l_p^p error of the non-outlier columns against the chosen columns.
double lp_select_error(const DenseMatrix& a, const SelectResult& result, double p);

struct LpSweep {
  SelectResult best;
  double theta = 0.0;
  GuessLadder ladder;
  std::vector<double> failed_guesses;
};

// Ascending ladder over [lp_mass * 2^-60, lp_mass]; every guess restarts
// the generator from `seed`. Throws SweepFailure if no guess succeeds.
LpSweep lp_select_sweep(const DenseMatrix& a, Index m, Index k, double delta, double p,
                        double ladder_epsilon, std::uint64_t seed);

}  // namespace robpca
