#include "robpca/harness.hpp"

#include "robpca/errors.hpp"
#include "robpca/iterative_svd.hpp"
#include "robpca/lp.hpp"
#include "robpca/sampling.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

namespace robpca {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::iter_svd: return "iter-svd";
    case Algorithm::select: return "select";
    case Algorithm::lp_select: return "lp-select";
    case Algorithm::brute_force: return "brute-force";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "iter-svd") return Algorithm::iter_svd;
  if (name == "select") return Algorithm::select;
  if (name == "lp-select") return Algorithm::lp_select;
  if (name == "brute-force") return Algorithm::brute_force;
  throw ParameterError("unknown algorithm '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  params.validate();
  if (!(lp_ladder_epsilon > 0.0)) throw ParameterError("lp ladder epsilon must be positive");
}

namespace {

struct Instance {
  DenseMatrix a;
  std::optional<Partition> truth;
};

Instance load_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.instance_path) {
    Instance inst{load_matrix(*cfg.instance_path), std::nullopt};
    if (cfg.truth_path) {
      std::ifstream in(*cfg.truth_path);
      if (!in) throw FormatError("cannot open truth file '" + cfg.truth_path->string() + "'");
      inst.truth = partition_from_json(json::parse(in));
      if (inst.truth->n() != inst.a.cols()) throw FormatError("truth partition does not match the matrix");
    }
    return inst;
  }
  PlantedSpec spec = cfg.generator;
  spec.k = cfg.params.k;
  spec.m = cfg.params.m;
  spec.seed = seed;
  PlantedInstance planted = planted_instance(spec);
  return {std::move(planted.a), std::move(planted.truth)};
}

// residual / opt, with 0/0 read as 1.
double oracle_ratio(double residual, double opt, double mass) {
  const double zero = 1e-12 * mass + std::numeric_limits<double>::min();
  if (opt > zero) return residual / opt;
  return residual <= zero ? 1.0 : std::numeric_limits<double>::infinity();
}

Index ceil_log2(double x) {
  return x > 1.0 ? static_cast<Index>(std::ceil(std::log2(x))) : 0;
}

void run_iter_svd(const Instance& inst, const SolveParams& p, TrialRecord& rec) {
  const IterSvdSweep sweep = iterative_svd_sweep(inst.a, p.k, p.m, p.epsilon);
  const IterSvdOutcome& o = sweep.best;
  rec.status = to_string(o.status);
  rec.guess = o.xi;
  rec.outliers = static_cast<Index>(o.part.outliers().size());
  rec.dimension = o.space.dim();
  rec.depth = o.rounds;
  rec.trace = o.mu_trace;
  rec.residual = o.mu_trace.back();
  rec.objective = objective_error(inst.a, o.part, p.k).value();
  rec.hard_flags.emplace_back("status", o.status == SolveStatus::success);
  rec.hard_flags.emplace_back("residual_below_guess", rec.residual < (1.0 + p.epsilon) * o.xi * (1.0 + 1e-9));
  rec.hard_flags.emplace_back("round_count_bounds", o.count_bounds_hold);
  if (inst.truth && rec.planted_error && *rec.planted_error > 0.0) {
    const double lambda = inst.a.squared_norm() / *rec.planted_error;
    const Index bound = ceil_log2(lambda / p.epsilon);
    rec.hard_flags.emplace_back("round_budget", rec.outliers <= p.m * bound && rec.dimension <= p.k * bound);
  }
  if (rec.oracle_opt) {
    const double floor = std::max(inst.a.squared_norm() * std::ldexp(1.0, -60), std::numeric_limits<double>::min());
    const double f = (1.0 + p.epsilon) * (1.0 + p.epsilon);
    rec.hard_flags.emplace_back("residual_vs_oracle",
                                rec.residual <= f * std::max(*rec.oracle_opt, floor) * (1.0 + 1e-9));
  }
}

void select_structural_flags(const SelectResult& r, Index n, Index m, Index k, double eps, double delta,
                             Flags& flags) {
  flags.emplace_back("outlier_budget",
                     static_cast<double>(r.outliers.size()) <= (1.0 + delta) * static_cast<double>(m));
  flags.emplace_back("depth_bound", static_cast<double>(r.depth) <= select_depth_bound(n, m, eps, delta));
  flags.emplace_back("column_budget", static_cast<double>(r.chosen_columns.size()) <=
                                          select_column_budget(n, m, k, eps, delta, r.final_n0));
  std::vector<Index> all = r.chosen_columns;
  all.insert(all.end(), r.covered.begin(), r.covered.end());
  all.insert(all.end(), r.outliers.begin(), r.outliers.end());
  std::sort(all.begin(), all.end());
  bool exact = static_cast<Index>(all.size()) == n;
  for (Index i = 0; exact && i < n; ++i) exact = all[static_cast<std::size_t>(i)] == i;
  flags.emplace_back("partition", exact);
}

void run_select(const Instance& inst, const SolveParams& p, std::uint64_t seed, TrialRecord& rec) {
  Rng rng(seed);
  const SelectResult r = select(inst.a, p.m, p.k, p.epsilon, p.delta, rng);
  rec.status = to_string(r.status);
  rec.outliers = static_cast<Index>(r.outliers.size());
  rec.dimension = static_cast<Index>(r.chosen_columns.size());
  rec.depth = r.depth;
  for (const auto& round : r.rounds) rec.trace.push_back(round.error);
  rec.residual = select_residual(inst.a, r);
  rec.objective = objective_error(inst.a, Partition::from_outliers(inst.a.cols(), r.outliers), p.k).value();
  select_structural_flags(r, inst.a.cols(), p.m, p.k, p.epsilon, p.delta, rec.hard_flags);
  const double factor = p.epsilon < 1.0 ? (1.0 + p.epsilon) / (1.0 - p.epsilon)
                                        : std::numeric_limits<double>::infinity();
  if (rec.planted_error) {
    rec.stat_flags.emplace_back("error_vs_planted", rec.residual <= factor * *rec.planted_error * (1.0 + 1e-6) +
                                                        1e-12 * inst.a.squared_norm());
  }
  if (rec.oracle_opt) {
    rec.stat_flags.emplace_back("error_vs_oracle", rec.residual <= factor * *rec.oracle_opt * (1.0 + 1e-6) +
                                                       1e-12 * inst.a.squared_norm());
  }
}

void run_lp_select(const Instance& inst, const SolveParams& p, std::uint64_t seed, double ladder_eps,
                   TrialRecord& rec) {
  const LpSweep sweep = lp_select_sweep(inst.a, p.m, p.k, p.delta, p.p, ladder_eps, seed);
  const SelectResult& r = sweep.best;
  rec.status = to_string(r.status);
  rec.guess = sweep.theta;
  rec.outliers = static_cast<Index>(r.outliers.size());
  rec.dimension = static_cast<Index>(r.chosen_columns.size());
  rec.depth = r.depth;
  for (const auto& round : r.rounds) rec.trace.push_back(static_cast<double>(round.marked));
  rec.residual = lp_select_error(inst.a, r, p.p);
  rec.objective = objective_error(inst.a, Partition::from_outliers(inst.a.cols(), r.outliers), p.k).value();
  const Index n = inst.a.cols();
  rec.hard_flags.emplace_back("status", r.status == SolveStatus::success);
  rec.hard_flags.emplace_back("outlier_budget",
                              static_cast<double>(r.outliers.size()) <= (1.0 + p.delta) * static_cast<double>(p.m));
  rec.hard_flags.emplace_back("column_budget", static_cast<double>(r.chosen_columns.size()) <=
                                                   select_column_budget(n, p.m, p.k, 1.0, p.delta, r.final_n0));
  // Each accepted round removes at least a tenth of the N - m presumed inliers.
  const double depth_bound =
      p.m == 0 ? std::numeric_limits<double>::infinity()
               : std::ceil(std::max(0.0, std::log(static_cast<double>(n) / (p.delta * static_cast<double>(p.m)))) /
                           std::log(10.0 / 9.0)) + 1.0;
  rec.hard_flags.emplace_back("depth_bound", static_cast<double>(r.depth) <= depth_bound);
  rec.hard_flags.emplace_back("lp_error_bound",
                              rec.residual <= 100.0 * static_cast<double>(p.k + 1) * sweep.theta * (1.0 + 1e-9));
}

TrialRecord run_trial(const ExperimentConfig& cfg, Index trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = cfg.params.seed + static_cast<std::uint64_t>(trial);
  try {
    const Instance inst = load_instance(cfg, rec.seed);
    const SolveParams& p = cfg.params;
    p.validate(inst.a.cols());
    if (inst.truth) rec.planted_error = objective_error(inst.a, *inst.truth, p.k).value();

    if (cfg.algorithm == Algorithm::brute_force) {
      const OracleResult o = brute_force_opt(inst.a, p.k, p.m, cfg.oracle_guard);
      rec.status = "SUCCESS";
      rec.objective = o.opt.value();
      rec.residual = o.opt.value();
      rec.outliers = static_cast<Index>(o.part.outliers().size());
      rec.dimension = std::min({p.k, inst.a.rows(), static_cast<Index>(o.part.inliers().size())});
      rec.oracle_opt = o.opt.value();
      rec.oracle_ratio = oracle_ratio(rec.residual, o.opt.value(), inst.a.squared_norm());
      rec.hard_flags.emplace_back("oracle_self", *rec.oracle_ratio == 1.0);
    } else {
      if (binomial(inst.a.cols(), p.m) <= cfg.oracle_guard) {
        rec.oracle_opt = brute_force_opt(inst.a, p.k, p.m, cfg.oracle_guard).opt.value();
      }
      switch (cfg.algorithm) {
        case Algorithm::iter_svd: run_iter_svd(inst, p, rec); break;
        case Algorithm::select: run_select(inst, p, rec.seed, rec); break;
        case Algorithm::lp_select: run_lp_select(inst, p, rec.seed, cfg.lp_ladder_epsilon, rec); break;
        case Algorithm::brute_force: break;
      }
      if (rec.oracle_opt && cfg.algorithm != Algorithm::lp_select) {
        rec.oracle_ratio = oracle_ratio(rec.residual, *rec.oracle_opt, inst.a.squared_norm());
      }
    }
  } catch (const SweepFailure& e) {
    rec.status = "FAIL";
    rec.message = e.what();
    rec.hard_flags.emplace_back("status", false);
  } catch (const std::exception& e) {
    rec.status = "ERROR";
    rec.message = e.what();
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

json flags_to_json(const Flags& flags) {
  json j = json::object();
  for (const auto& [name, ok] : flags) j[name] = ok;
  return j;
}

json stats_of(const std::vector<double>& xs) {
  if (xs.empty()) return nullptr;
  const double sum = std::accumulate(xs.begin(), xs.end(), 0.0);
  return json{{"mean", sum / static_cast<double>(xs.size())},
              {"min", *std::min_element(xs.begin(), xs.end())},
              {"max", *std::max_element(xs.begin(), xs.end())}};
}

}  // namespace

Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Report report;
  report.config = cfg;
  report.trials.resize(static_cast<std::size_t>(cfg.trials));

  unsigned workers = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(cfg.trials));
  std::atomic<Index> next{0};
  auto work = [&] {
    for (Index t = next++; t < cfg.trials; t = next++) {
      report.trials[static_cast<std::size_t>(t)] = run_trial(cfg, t);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  report.summary = summarize(report.trials);
  report.hard_failure = report.summary.at("hard_failures").get<Index>() > 0;
  return report;
}

json to_json(const TrialRecord& rec, bool include_timing) {
  json j{{"trial", rec.trial},
         {"seed", rec.seed},
         {"status", rec.status},
         {"objective", rec.objective},
         {"residual", rec.residual},
         {"guess", rec.guess},
         {"outliers", rec.outliers},
         {"dimension", rec.dimension},
         {"depth", rec.depth},
         {"trace", rec.trace},
         {"hard_flags", flags_to_json(rec.hard_flags)},
         {"stat_flags", flags_to_json(rec.stat_flags)}};
  if (!rec.message.empty()) j["message"] = rec.message;
  if (rec.oracle_opt) j["oracle_opt"] = *rec.oracle_opt;
  if (rec.oracle_ratio) j["oracle_ratio"] = *rec.oracle_ratio;
  if (rec.planted_error) j["planted_error"] = *rec.planted_error;
  if (include_timing) j["wall_ms"] = rec.wall_ms;
  return j;
}

json summarize(const std::vector<TrialRecord>& trials) {
  json s;
  s["trials"] = trials.size();
  json status = json::object();
  std::vector<double> objective;
  std::vector<double> residual;
  std::vector<double> ratio;
  Index hard_failures = 0;
  std::map<std::string, std::pair<Index, Index>> hard;
  std::map<std::string, std::pair<Index, Index>> stat;
  for (const auto& t : trials) {
    status[t.status] = status.value(t.status, 0) + 1;
    if (t.status == "ERROR") ++hard_failures;
    if (t.status == "ERROR") continue;
    objective.push_back(t.objective);
    residual.push_back(t.residual);
    if (t.oracle_ratio && std::isfinite(*t.oracle_ratio)) ratio.push_back(*t.oracle_ratio);
    bool trial_ok = true;
    for (const auto& [name, ok] : t.hard_flags) {
      auto& [pass, total] = hard[name];
      pass += ok ? 1 : 0;
      ++total;
      trial_ok = trial_ok && ok;
    }
    if (!trial_ok) ++hard_failures;
    for (const auto& [name, ok] : t.stat_flags) {
      auto& [pass, total] = stat[name];
      pass += ok ? 1 : 0;
      ++total;
    }
  }
  s["status"] = status;
  s["objective"] = stats_of(objective);
  s["residual"] = stats_of(residual);
  s["oracle_ratio"] = stats_of(ratio);
  json hj = json::object();
  for (const auto& [name, pt] : hard) hj[name] = json{{"passed", pt.first}, {"total", pt.second}};
  s["hard_flags"] = hj;
  json sj = json::object();
  for (const auto& [name, pt] : stat) {
    sj[name] = json{{"passed", pt.first},
                    {"total", pt.second},
                    {"rate", static_cast<double>(pt.first) / static_cast<double>(pt.second)},
                    {"lower_bound_99", clopper_pearson_lower(pt.first, pt.second, 0.99)}};
  }
  s["stat_flags"] = sj;
  s["hard_failures"] = hard_failures;
  return s;
}

void write_report_jsonl(std::ostream& out, const Report& report, bool include_timing) {
  for (const auto& t : report.trials) out << to_json(t, include_timing).dump() << '\n';
  json summary = report.summary;
  summary["algorithm"] = to_string(report.config.algorithm);
  summary["k"] = report.config.params.k;
  summary["m"] = report.config.params.m;
  summary["epsilon"] = report.config.params.epsilon;
  summary["delta"] = report.config.params.delta;
  summary["p"] = report.config.params.p;
  summary["seed"] = report.config.params.seed;
  out << json{{"summary", summary}}.dump() << '\n';
}

void write_report_csv(std::ostream& out, const Report& report) {
  out << "trial,seed,status,objective,residual,guess,outliers,dimension,depth,oracle_opt,oracle_ratio,"
         "planted_error,hard_ok,stat_ok,wall_ms\n";
  auto opt = [](const std::optional<double>& v) { return v ? json(*v).dump() : std::string(); };
  for (const auto& t : report.trials) {
    const bool hard_ok = std::all_of(t.hard_flags.begin(), t.hard_flags.end(), [](const auto& f) { return f.second; });
    const bool stat_ok = std::all_of(t.stat_flags.begin(), t.stat_flags.end(), [](const auto& f) { return f.second; });
    out << t.trial << ',' << t.seed << ',' << t.status << ',' << json(t.objective).dump() << ','
        << json(t.residual).dump() << ',' << json(t.guess).dump() << ',' << t.outliers << ',' << t.dimension << ','
        << t.depth << ',' << opt(t.oracle_opt) << ',' << opt(t.oracle_ratio) << ',' << opt(t.planted_error) << ','
        << (hard_ok ? 1 : 0) << ',' << (stat_ok ? 1 : 0) << ',' << t.wall_ms << '\n';
  }
}

double clopper_pearson_lower(Index successes, Index trials, double confidence) {
  if (trials <= 0) throw ParameterError("clopper_pearson_lower: trials must be positive");
  if (successes < 0 || successes > trials) throw ParameterError("clopper_pearson_lower: successes out of range");
  if (successes == 0) return 0.0;
  const double alpha = 1.0 - confidence;
  return boost::math::ibeta_inv(static_cast<double>(successes), static_cast<double>(trials - successes + 1), alpha);
}

CoverageTrialStats validate_lemma2(const Lemma2Config& cfg) {
  if (cfg.trials < 1) throw ParameterError("trials must be >= 1");
  PlantedSpec spec;
  spec.d = cfg.d;
  spec.n = cfg.n;
  spec.k = cfg.k;
  spec.m = 0;
  spec.sigma = cfg.sigma;
  spec.seed = cfg.seed;
  const PlantedInstance inst = planted_instance(spec);
  Rng rng(cfg.seed ^ 0x5eed5eed5eed5eedULL);
  CoverageTrialStats stats;
  stats.trials = cfg.trials;
  stats.epsilon = cfg.epsilon;
  stats.k = cfg.k;
  for (Index t = 0; t < cfg.trials; ++t) {
    if (coverage_trial(inst.a, cfg.k, cfg.epsilon, rng)) ++stats.successes;
  }
  stats.lower_bound_99 = clopper_pearson_lower(stats.successes, stats.trials, 0.99);
  return stats;
}

Lemma5Summary validate_lemma5(const Graph& g, Index subset_count, std::uint64_t seed) {
  Lemma5Summary s;
  const Index ne = g.n_edges();
  auto check = [&](const std::vector<Index>& subset) {
    const EdgeSubspaceCheck c = verify_edge_subspace_bound(g, subset);
    ++s.checked;
    if (!c.holds) {
      if (s.violations == 0) {
        s.witness = subset;
        s.witness_check = c;
      }
      ++s.violations;
    }
  };
  if (ne <= 12) {
    s.exhaustive = true;
    for (std::uint32_t mask = 0; mask < (1u << ne); ++mask) {
      std::vector<Index> subset;
      for (Index e = 0; e < ne; ++e) {
        if (mask & (1u << e)) subset.push_back(e);
      }
      check(subset);
    }
    return s;
  }
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (Index t = 0; t < subset_count; ++t) {
    std::vector<Index> subset;
    for (Index e = 0; e < ne; ++e) {
      if (coin(rng)) subset.push_back(e);
    }
    check(subset);
  }
  return s;
}

json to_json(const CoverageTrialStats& s) {
  return json{{"trials", s.trials},       {"successes", s.successes},          {"rate", s.rate()},
              {"epsilon", s.epsilon},     {"k", s.k},                          {"lower_bound_99", s.lower_bound_99},
              {"target_rate", s.epsilon * s.epsilon / 8.0}};
}

json to_json(const Lemma5Summary& s) {
  json j{{"checked", s.checked}, {"violations", s.violations}, {"exhaustive", s.exhaustive}, {"passed", s.passed()}};
  if (!s.passed()) {
    j["witness"] = s.witness;
    j["witness_n_prime"] = s.witness_check.n_prime;
    j["witness_rank"] = s.witness_check.rank;
  }
  return j;
}

}  // namespace robpca
