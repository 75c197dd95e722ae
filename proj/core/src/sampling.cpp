#include "robpca/sampling.hpp"

#include "ordering.hpp"
#include "robpca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

namespace robpca {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Index ceil_count(double x) {
  if (!std::isfinite(x)) throw ParameterError("non-finite count");
  return static_cast<Index>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

std::optional<Index> select_sample_size(Index active, Index m, Index k, double epsilon) {
  check_epsilon(epsilon);
  const double base = 8.0 * static_cast<double>(k) / (epsilon * epsilon * epsilon);
  if (m == 0) return ceil_count(base);
  if (active <= m) return std::nullopt;
  const double factor = static_cast<double>(active) / static_cast<double>(active - m);
  return ceil_count(factor * base);
}

Index select_marked_count(Index active, Index m, Index n0, double epsilon) {
  const double e3 = epsilon * epsilon * epsilon;
  return std::min(ceil_count(e3 * static_cast<double>(active - m)), active - n0);
}

Index select_repetitions(Index total_columns, double epsilon) {
  if (total_columns <= 1) return 1;
  const double reps = 16.0 * std::log(static_cast<double>(total_columns)) / (epsilon * epsilon);
  return std::max<Index>(1, ceil_count(reps));
}

std::vector<Index> sample_without_replacement(Index n, Index s, Rng& rng) {
  if (s < 0 || s > n) throw ParameterError("sample size must lie in [0, n]");
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < s; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(s));
  return pool;
}

Rng substream(std::uint64_t round_seed, std::uint64_t rep) {
  return Rng(splitmix64(round_seed ^ splitmix64(rep + 1)));
}

SampleRoundResult sample_round(const DenseMatrix& active, Index m, Index k, double epsilon,
                               Index total_columns, Rng& rng) {
  const Index n_active = active.cols();
  const auto n0 = select_sample_size(n_active, m, k, epsilon);
  if (!n0 || n_active < *n0) {
    throw ParameterError("sample_round needs at least n0 active columns and more than m");
  }
  const Index marked = select_marked_count(n_active, m, *n0, epsilon);
  const Index reps = select_repetitions(total_columns, epsilon);
  const std::uint64_t round_seed = rng();

  SampleRoundResult best;
  best.error = std::numeric_limits<double>::infinity();
  std::vector<double> residual(static_cast<std::size_t>(n_active));
  for (Index rep = 0; rep < reps; ++rep) {
    Rng local = substream(round_seed, static_cast<std::uint64_t>(rep));
    std::vector<Index> sample = sample_without_replacement(n_active, *n0, local);
    const Subspace space = Subspace::span_of(active.select_columns(sample).values());
    if (space.dim() == active.rows()) {
      std::fill(residual.begin(), residual.end(), 0.0);
    } else {
      residual = residual_sq_norms(active, space);
    }
    std::vector<Index> chosen = detail::smallest_positions(residual, marked);
    double x = 0.0;
    for (Index c : chosen) x += residual[static_cast<std::size_t>(c)];
    if (x < best.error) {
      std::sort(chosen.begin(), chosen.end());
      best.sample = std::move(sample);
      best.marked = std::move(chosen);
      best.error = x;
      best.repetition = rep;
    }
  }
  return best;
}

SelectResult select(const DenseMatrix& a, Index m, Index k, double epsilon, double delta, Rng& rng) {
  check_epsilon(epsilon);
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  if (k < 0) throw ParameterError("k must be nonnegative");
  const Index n = a.cols();
  if (m < 0 || m > n) throw ParameterError("m must lie in [0, n]");

  SelectResult out;
  out.n = n;
  std::vector<Index> active(static_cast<std::size_t>(n));
  std::iota(active.begin(), active.end(), Index{0});
  std::set<Index> chosen_set;
  std::vector<Index> covered;
  std::vector<Index> outliers;
  auto choose = [&](Index col) {
    if (chosen_set.insert(col).second) out.chosen_columns.push_back(col);
  };
  const double outlier_cap = (1.0 + delta) * static_cast<double>(m);

  while (true) {
    ++out.depth;
    const auto n_active = static_cast<Index>(active.size());
    const auto n0 = select_sample_size(n_active, m, k, epsilon);
    out.final_n0 = n0.value_or(0);
    if (n0 && n_active < *n0) {
      for (Index c : active) choose(c);
      break;
    }
    if (static_cast<double>(n_active) <= outlier_cap) {
      outliers.insert(outliers.end(), active.begin(), active.end());
      break;
    }
    if (n_active == *n0) {
      // Nothing may be marked without eating into the sample; treat as the
      // choose-everything base case.
      for (Index c : active) choose(c);
      break;
    }

    const DenseMatrix sub = a.select_columns(active);
    const SampleRoundResult round = sample_round(sub, m, k, epsilon, n, rng);
    out.rounds.push_back({out.depth - 1, n_active, *n0, static_cast<Index>(round.marked.size()), round.error});
    for (Index pos : round.sample) choose(active[static_cast<std::size_t>(pos)]);

    std::vector<char> is_marked(active.size(), 0);
    for (Index pos : round.marked) is_marked[static_cast<std::size_t>(pos)] = 1;
    std::vector<Index> rest;
    rest.reserve(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      (is_marked[i] ? covered : rest).push_back(active[i]);
    }
    active = std::move(rest);
  }

  // A chosen column lies in span(chosen), so it is reported only as chosen.
  auto not_chosen = [&](Index c) { return chosen_set.count(c) == 0; };
  for (Index c : covered) {
    if (not_chosen(c)) out.covered.push_back(c);
  }
  for (Index c : outliers) {
    if (not_chosen(c)) out.outliers.push_back(c);
  }
  std::sort(out.covered.begin(), out.covered.end());
  std::sort(out.outliers.begin(), out.outliers.end());
  return out;
}

double select_residual(const DenseMatrix& a, const SelectResult& result) {
  const Partition part = Partition::from_outliers(a.cols(), result.outliers);
  if (part.inliers().empty()) return 0.0;
  const Subspace space = Subspace::span_of(a.select_columns(result.chosen_columns).values());
  const std::vector<double> r = residual_sq_norms(a.select_columns(part.inliers()), space);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

double select_depth_bound(Index n, Index m, double epsilon, double delta) {
  if (m == 0) return std::numeric_limits<double>::infinity();
  const double e3 = epsilon * epsilon * epsilon;
  const double ratio = static_cast<double>(n) / (delta * static_cast<double>(m));
  return std::ceil(std::max(0.0, std::log(ratio)) / e3) + 1.0;
}

double select_column_budget(Index n, Index m, Index k, double epsilon, double delta, Index final_n0) {
  if (m == 0) return std::numeric_limits<double>::infinity();
  const double e6 = std::pow(epsilon, 6);
  const double logs = std::log2(static_cast<double>(n) / static_cast<double>(m)) + 2.0 / delta;
  return 16.0 * static_cast<double>(k) / e6 * logs + static_cast<double>(final_n0);
}

bool coverage_trial(const DenseMatrix& clean, Index k, double epsilon, Rng& rng) {
  check_epsilon(epsilon);
  const Index n = clean.cols();
  const Index s = ceil_count(4.0 * static_cast<double>(k) / (epsilon * epsilon));
  if (n < s || n == 0) {
    throw ParameterError("coverage_trial needs at least ceil(4k/eps^2)=" + std::to_string(s) + " columns");
  }
  if (k > std::min(clean.rows(), n)) throw ParameterError("k exceeds min(d, n)");
  const double err_k = best_rank_k(clean, k).error.value();
  const double threshold = (1.0 + epsilon) * err_k / static_cast<double>(n) +
                           1e-24 * clean.squared_norm() / static_cast<double>(n);
  const Index required = ceil_count(epsilon * epsilon * static_cast<double>(n - s) / 8.0);

  const std::vector<Index> sample = sample_without_replacement(n, s, rng);
  std::vector<char> in_sample(static_cast<std::size_t>(n), 0);
  for (Index c : sample) in_sample[static_cast<std::size_t>(c)] = 1;
  const Subspace space = Subspace::span_of(clean.select_columns(sample).values());
  const std::vector<double> residual = residual_sq_norms(clean, space);
  Index good = 0;
  for (Index j = 0; j < n; ++j) {
    if (!in_sample[static_cast<std::size_t>(j)] && residual[static_cast<std::size_t>(j)] <= threshold) ++good;
  }
  return good >= required;
}

}  // namespace robpca
