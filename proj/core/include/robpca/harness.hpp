#pragma once

//
// Experiment runner: loads or generates instances, runs a solver per trial,
// evaluates the objective, optionally runs the brute-force oracle, and
// records pass/fail flags for every guarantee that can be checked from the
// trial's own data.
//
// Hard flags are deterministic guarantees (structural bounds, FAIL-free
// sweeps); a false hard flag makes the experiment exit with code 2.
// Statistical flags (high-probability error bounds) are aggregated into a
// pass rate with a one-sided 99% Clopper-Pearson lower bound.
//

#include "robpca/instances.hpp"
#include "robpca/io.hpp"
#include "robpca/oracle.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace robpca {

enum class Algorithm { iter_svd, select, lp_select, brute_force };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

struct ExperimentConfig {
  // Matrix text file; when absent the generator below is used with
  // k, m and a per-trial seed taken from params.
  std::optional<std::filesystem::path> instance_path;
  // Optional truth sidecar for a file instance.
  std::optional<std::filesystem::path> truth_path;
  PlantedSpec generator;
  Algorithm algorithm = Algorithm::iter_svd;
  SolveParams params;
  Index trials = 1;
  std::uint64_t oracle_guard = 20'000;
  double lp_ladder_epsilon = 1.0;
  unsigned workers = 0;  // 0: hardware concurrency

  void validate() const;
};

using Flags = std::vector<std::pair<std::string, bool>>;

struct TrialRecord {
  Index trial = 0;
  std::uint64_t seed = 0;
  std::string status;  // SUCCESS, FAIL or ERROR
  std::string message;
  double objective = 0.0;  // err_k of the returned inliers
  double residual = 0.0;   // error against the solver's own subspace
  double guess = 0.0;      // xi or theta the solution was found at
  Index outliers = 0;
  Index dimension = 0;     // dim V or number of chosen columns
  Index depth = 0;         // rounds (iter-svd) or SELECT depth
  std::vector<double> trace;
  std::optional<double> oracle_opt;
  std::optional<double> oracle_ratio;
  std::optional<double> planted_error;
  Flags hard_flags;
  Flags stat_flags;
  double wall_ms = 0.0;
};

struct Report {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;  // sorted by trial index
  json summary;
  bool hard_failure = false;
};

Report run_experiment(const ExperimentConfig& cfg);

json to_json(const TrialRecord& rec, bool include_timing = true);
json summarize(const std::vector<TrialRecord>& trials);

// One JSON object per trial, then the summary object.
void write_report_jsonl(std::ostream& out, const Report& report, bool include_timing = true);
void write_report_csv(std::ostream& out, const Report& report);

// One-sided lower confidence bound for a binomial proportion.
double clopper_pearson_lower(Index successes, Index trials, double confidence = 0.99);

struct CoverageTrialStats {
  Index trials = 0;
  Index successes = 0;
  double epsilon = 0.0;
  Index k = 0;
  double rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }
  double lower_bound_99 = 0.0;
};

struct Lemma2Config {
  Index d = 20;
  Index n = 200;
  Index k = 1;
  double epsilon = 1.0;
  double sigma = 0.1;
  Index trials = 500;
  std::uint64_t seed = 0;
};

// Draws `trials` coverage samples on one seeded outlier-free instance.
CoverageTrialStats validate_lemma2(const Lemma2Config& cfg);

struct Lemma5Summary {
  Index checked = 0;
  Index violations = 0;
  bool exhaustive = false;
  std::vector<Index> witness;  // first violating subset, if any
  EdgeSubspaceCheck witness_check;
  bool passed() const { return violations == 0; }
};

// Exhaustive over all subsets when |E| <= 12, otherwise `subset_count`
// random subsets (each edge kept with probability 1/2).
Lemma5Summary validate_lemma5(const Graph& g, Index subset_count, std::uint64_t seed);

json to_json(const CoverageTrialStats& s);
json to_json(const Lemma5Summary& s);

}  // namespace robpca
