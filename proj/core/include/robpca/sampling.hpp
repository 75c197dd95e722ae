#pragma once

//
// Recursive iterative uniform sampling with outliers (SELECT) and the
// single-shot coverage primitive it is built on.
//
// SELECT works on an active column set. While the set is large enough it
// draws many uniform samples R of n0 columns, keeps the sample whose
// ceil(eps^3 (N - m)) best-covered columns have the least total squared
// residual against span(R), marks those columns covered and recurses on the
// rest. It stops by either choosing every remaining column (too few left to
// sample) or declaring them all outliers (at most (1 + delta) m left).
//

#include "robpca/iterative_svd.hpp"
#include "robpca/matrix.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace robpca {

using Rng = std::mt19937_64;

struct RoundRecord {
  Index round = 0;
  Index active = 0;       // N at this call
  Index sample_size = 0;  // |R|
  Index marked = 0;       // columns marked covered
  double error = 0.0;     // X, or covered count for the l_p variant
};

struct SelectResult {
  SolveStatus status = SolveStatus::success;
  Index n = 0;
  std::vector<Index> outliers;        // sorted
  std::vector<Index> chosen_columns;  // selection order, distinct
  std::vector<Index> covered;         // sorted; disjoint from the other two
  std::vector<RoundRecord> rounds;
  Index depth = 0;     // number of SELECT calls, including the terminal one
  Index final_n0 = 0;  // n0 at the terminal call (0 when undefined)
};

struct SampleRoundResult {
  std::vector<Index> sample;  // R*, positions in the active matrix
  std::vector<Index> marked;  // A*, positions in the active matrix, sorted
  double error = 0.0;         // X
  Index repetition = 0;       // which repetition produced R*
};

// ceil(x) that ignores sub-1e-9 relative overshoot from floating point.
Index ceil_count(double x);

// n0 = ceil((alpha / (alpha - 1)) * 8k / eps^3) with alpha = N / m. Empty
// when N <= m, where the formula is undefined.
std::optional<Index> select_sample_size(Index active, Index m, Index k, double epsilon);

// min(ceil(eps^3 (N - m)), N - n0).
Index select_marked_count(Index active, Index m, Index n0, double epsilon);

// max(1, ceil(16 ln(n) / eps^2)) with n the original column count.
Index select_repetitions(Index total_columns, double epsilon);

// Uniform s-subset of [0, n) via a Fisher-Yates prefix; order is draw order.
std::vector<Index> sample_without_replacement(Index n, Index s, Rng& rng);

// Derives the generator for repetition `rep` from a per-round seed so that
// repetitions are independent of evaluation order.
Rng substream(std::uint64_t round_seed, std::uint64_t rep);

SampleRoundResult sample_round(const DenseMatrix& active, Index m, Index k, double epsilon,
                               Index total_columns, Rng& rng);

SelectResult select(const DenseMatrix& a, Index m, Index k, double epsilon, double delta, Rng& rng);

// Squared residual of every non-outlier column against span(chosen columns).
double select_residual(const DenseMatrix& a, const SelectResult& result);

// ceil(ln(n / (delta m)) / eps^3) + 1; +inf when m = 0.
double select_depth_bound(Index n, Index m, double epsilon, double delta);

// (16k / eps^6) (log2(n / m) + 2 / delta) + final_n0; +inf when m = 0.
double select_column_budget(Index n, Index m, Index k, double epsilon, double delta, Index final_n0);

// One draw of the no-outlier coverage event: sample ceil(4k/eps^2) columns
// and check that at least ceil(eps^2 (n - s) / 8) unsampled columns have
// squared residual at most (1 + eps) err_k(A) / n.
bool coverage_trial(const DenseMatrix& clean, Index k, double epsilon, Rng& rng);

}  // namespace robpca
