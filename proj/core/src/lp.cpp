#include "robpca/lp.hpp"

#include "ordering.hpp"
#include "robpca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace robpca {

namespace {

double objective(const Eigen::VectorXd& r, double p) {
  return r.array().abs().pow(p).sum();
}

// Smoothed penalty phi(r) = (r^2 + eta^2)^(p/2) and its first two derivatives.
struct Smoothed {
  double p;
  double eta2;

  double value(const Eigen::VectorXd& r) const {
    return (r.array().square() + eta2).pow(0.5 * p).sum();
  }
  Eigen::ArrayXd first(const Eigen::VectorXd& r) const {
    return p * r.array() * (r.array().square() + eta2).pow(0.5 * p - 1.0);
  }
  Eigen::ArrayXd second(const Eigen::VectorXd& r) const {
    const Eigen::ArrayXd s = r.array().square() + eta2;
    return p * s.pow(0.5 * p - 2.0) * ((p - 1.0) * r.array().square() + eta2);
  }
};

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("p must be >= 1");
}

}  // namespace

double lp_residual(const Eigen::VectorXd& u, const Eigen::MatrixXd& cols, double p) {
  check_p(p);
  if (cols.rows() != u.size() && cols.cols() > 0) throw ParameterError("lp_residual: dimension mismatch");
  if (!u.allFinite() || !cols.allFinite()) throw NonFiniteError("lp_residual: non-finite input");
  const double scale = u.size() == 0 ? 0.0 : u.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;

  // Drop zero columns and normalise the rest; the optimum value is unchanged.
  std::vector<Index> keep;
  for (Index j = 0; j < cols.cols(); ++j) {
    if (cols.col(j).cwiseAbs().maxCoeff() > 0.0) keep.push_back(j);
  }
  const Eigen::VectorXd v = u / scale;
  const double back = std::pow(scale, p);
  if (keep.empty()) return objective(v, p) * back;
  Eigen::MatrixXd c(u.size(), static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const auto col = cols.col(keep[j]);
    c.col(static_cast<Index>(j)) = col / col.cwiseAbs().maxCoeff();
  }
  const Index q = c.cols();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> ls(c);
  ls.setThreshold(1e-12);
  Eigen::VectorXd x = ls.solve(v);
  double best = objective(v - c * x, p);
  Eigen::VectorXd best_x = x;

  const double best_ls = best;
  if (best_ls > 0.0) {
    // eta continuation; for p >= 2 the penalty is already smooth.
    std::vector<double> etas;
    if (p < 2.0) {
      for (double eta = 1e-1; eta >= 1e-11; eta *= 0.1) etas.push_back(eta);
    } else {
      etas.push_back(0.0);
    }
    for (double eta : etas) {
      const Smoothed phi{p, eta * eta};
      for (int it = 0; it < 60; ++it) {
        const Eigen::VectorXd r = v - c * x;
        const double f = phi.value(r);
        const Eigen::VectorXd g = -(c.transpose() * phi.first(r).matrix());
        Eigen::MatrixXd h = c.transpose() * phi.second(r).matrix().asDiagonal() * c;
        const double ridge = 1e-13 * (h.trace() / static_cast<double>(q)) + 1e-300;
        h.diagonal().array() += ridge;
        const Eigen::VectorXd dx = h.ldlt().solve(-g);
        const double slope = g.dot(dx);
        if (!(slope < 0.0) || !dx.allFinite()) break;
        double t = 1.0;
        Eigen::VectorXd trial = x + dx;
        int backtracks = 0;
        while (phi.value(v - c * trial) > f + 1e-4 * t * slope && backtracks < 60) {
          t *= 0.5;
          trial = x + t * dx;
          ++backtracks;
        }
        if (backtracks == 60) break;
        x = trial;
        const double obj = objective(v - c * x, p);
        if (obj < best) {
          best = obj;
          best_x = x;
        }
        if (-slope <= 1e-15 * std::max(f, 1e-300)) break;
      }
    }

    if (p == 1.0) {
      // An l_1 optimum interpolates rank(C) rows; solve on the rows the
      // current iterate nearly interpolates.
      const Index rank = std::max<Index>(ls.rank(), 1);
      const Eigen::VectorXd r = v - c * best_x;
      std::vector<double> mag(static_cast<std::size_t>(r.size()));
      for (Index i = 0; i < r.size(); ++i) mag[static_cast<std::size_t>(i)] = std::abs(r(i));
      const std::vector<Index> rows = detail::smallest_positions(mag, rank);
      Eigen::MatrixXd cs(rank, q);
      Eigen::VectorXd vs(rank);
      for (Index i = 0; i < rank; ++i) {
        cs.row(i) = c.row(rows[static_cast<std::size_t>(i)]);
        vs(i) = v(rows[static_cast<std::size_t>(i)]);
      }
      const Eigen::VectorXd xv = cs.completeOrthogonalDecomposition().solve(vs);
      if (xv.allFinite()) best = std::min(best, objective(v - c * xv, p));
    }
  }
  return best * back;
}

double lp_mass(const DenseMatrix& a, double p) {
  check_p(p);
  return a.values().array().abs().pow(p).sum();
}

namespace {

// Per-column l_p^p residuals of `cols_idx` columns of `a` against the columns `basis_idx`.
std::vector<double> lp_residuals(const DenseMatrix& a, const std::vector<Index>& cols_idx,
                                 const Eigen::MatrixXd& basis, double p) {
  std::vector<double> out(cols_idx.size());
  for (std::size_t i = 0; i < cols_idx.size(); ++i) {
    out[i] = lp_residual(a.col(cols_idx[i]), basis, p);
  }
  return out;
}

}  // namespace

SelectResult lp_select(const DenseMatrix& a, Index m, Index k, double delta, double p,
                       double theta_guess, Rng& rng) {
  check_p(p);
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  if (!(theta_guess > 0.0) || !std::isfinite(theta_guess)) throw ParameterError("theta_guess must be positive");
  if (k < 0) throw ParameterError("k must be nonnegative");
  const Index n = a.cols();
  if (m < 0 || m > n) throw ParameterError("m must lie in [0, n]");

  SelectResult out;
  out.n = n;
  const Index sample_size = 2 * k;
  const Index reps = select_repetitions(n, 1.0);
  const double threshold = n == 0 ? 0.0 : 100.0 * static_cast<double>(k + 1) * theta_guess / static_cast<double>(n);
  const double outlier_cap = (1.0 + delta) * static_cast<double>(m);

  std::vector<Index> active(static_cast<std::size_t>(n));
  std::iota(active.begin(), active.end(), Index{0});
  std::set<Index> chosen_set;
  std::vector<Index> outliers;
  auto choose = [&](Index col) {
    if (chosen_set.insert(col).second) out.chosen_columns.push_back(col);
  };

  while (true) {
    ++out.depth;
    const auto n_active = static_cast<Index>(active.size());
    std::optional<Index> n0;
    if (m == 0) {
      n0 = sample_size;
    } else if (n_active > m) {
      n0 = ceil_count(static_cast<double>(n_active) / static_cast<double>(n_active - m) *
                      static_cast<double>(sample_size));
    }
    out.final_n0 = n0.value_or(0);
    if (n0 && n_active < *n0) {
      for (Index c : active) choose(c);
      break;
    }
    if (static_cast<double>(n_active) <= outlier_cap) {
      outliers.insert(outliers.end(), active.begin(), active.end());
      break;
    }
    if (n_active == 0) break;

    const Index quota = ceil_count(static_cast<double>(n_active - m) / 10.0);
    const std::uint64_t round_seed = rng();
    bool accepted = false;
    for (Index rep = 0; rep < reps && !accepted; ++rep) {
      Rng local = substream(round_seed, static_cast<std::uint64_t>(rep));
      const std::vector<Index> pos = sample_without_replacement(n_active, sample_size, local);
      std::vector<Index> sample;
      for (Index s : pos) sample.push_back(active[static_cast<std::size_t>(s)]);
      const Eigen::MatrixXd basis = a.select_columns(sample).values();
      std::vector<char> in_sample(active.size(), 0);
      for (Index s : pos) in_sample[static_cast<std::size_t>(s)] = 1;

      std::vector<char> covered(active.size(), 0);
      Index count = 0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (in_sample[i] || lp_residual(a.col(active[i]), basis, p) <= threshold) {
          covered[i] = 1;
          ++count;
        }
      }
      if (count < quota) continue;
      accepted = true;
      out.rounds.push_back({out.depth - 1, n_active, sample_size, count, static_cast<double>(rep)});
      for (Index c : sample) choose(c);
      std::vector<Index> rest;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (covered[i]) {
          if (!in_sample[i]) out.covered.push_back(active[i]);
        } else {
          rest.push_back(active[i]);
        }
      }
      active = std::move(rest);
    }
    if (!accepted) {
      // Columns still active stay unclassified; a FAIL result is not a solution.
      out.status = SolveStatus::fail;
      break;
    }
  }

  for (Index c : outliers) {
    if (chosen_set.count(c) == 0) out.outliers.push_back(c);
  }
  std::sort(out.covered.begin(), out.covered.end());
  std::sort(out.outliers.begin(), out.outliers.end());
  return out;
}

bool lp_coverage_trial(const DenseMatrix& clean, Index k, double p, double theta, Rng& rng) {
  check_p(p);
  const Index n = clean.cols();
  if (n < 2 * k || n == 0) throw ParameterError("lp_coverage_trial needs at least 2k columns");
  const double threshold = 100.0 * static_cast<double>(k + 1) * theta / static_cast<double>(n);
  const std::vector<Index> sample = sample_without_replacement(n, 2 * k, rng);
  const Eigen::MatrixXd basis = clean.select_columns(sample).values();
  Index count = 0;
  for (Index j = 0; j < n; ++j) {
    if (lp_residual(clean.col(j), basis, p) <= threshold) ++count;
  }
  return count >= ceil_count(static_cast<double>(n) / 10.0);
}

double lp_select_error(const DenseMatrix& a, const SelectResult& result, double p) {
  const Partition part = Partition::from_outliers(a.cols(), result.outliers);
  const Eigen::MatrixXd basis = a.select_columns(result.chosen_columns).values();
  const std::vector<double> r = lp_residuals(a, part.inliers(), basis, p);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

LpSweep lp_select_sweep(const DenseMatrix& a, Index m, Index k, double delta, double p,
                        double ladder_epsilon, std::uint64_t seed) {
  const double mass = lp_mass(a, p);
  const double lower = std::max(mass * std::ldexp(1.0, -60), std::numeric_limits<double>::min());
  LpSweep sweep;
  sweep.ladder = guess_ladder(lower, std::max(mass, lower), ladder_epsilon);
  for (double theta : sweep.ladder.values) {
    Rng rng(seed);
    SelectResult r = lp_select(a, m, k, delta, p, theta, rng);
    if (r.status == SolveStatus::success) {
      sweep.best = std::move(r);
      sweep.theta = theta;
      return sweep;
    }
    sweep.failed_guesses.push_back(theta);
  }
  throw SweepFailure("lp_select failed for every guess on the ladder");
}

}  // namespace robpca
