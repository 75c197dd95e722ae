// robpca command-line front end.
//
// Exit codes: 0 on completion, 2 when a guarantee flag fails, 1 on errors.

#include "robpca/errors.hpp"
#include "robpca/harness.hpp"
#include "robpca/io.hpp"
#include "robpca/iterative_svd.hpp"
#include "robpca/lp.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

namespace fs = std::filesystem;
using namespace robpca;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitGuarantee = 2;

struct Common {
  std::string algo = "iter-svd";
  Index k = 1;
  Index m = 0;
  double epsilon = 0.5;
  double delta = 0.5;
  double p = 2.0;
  std::uint64_t seed = 0;
  Index trials = 1;
  std::string in;
  std::string out;
  std::string format = "json";
  SolveParams params() const { return SolveParams{k, m, epsilon, delta, p, seed}; }
};

struct GenOptions {
  std::string kind = "planted";
  Index d = 10;
  Index n = 50;
  double sigma = 0.0;
  std::string mode = "gaussian-far";
  double outlier_scale = 10.0;
  double edge_prob = 0.2;
  Index r = 0;
  std::string graph;
};

void add_common(CLI::App* app, Common& c, bool solver_flags) {
  if (solver_flags) {
    app->add_option("--algo", c.algo, "iter-svd | select | lp-select | brute-force")
        ->check(CLI::IsMember({"iter-svd", "select", "lp-select", "brute-force"}));
    app->add_option("--k", c.k, "target rank");
    app->add_option("--m", c.m, "outlier budget");
    app->add_option("--epsilon", c.epsilon, "accuracy parameter");
    app->add_option("--delta", c.delta, "outlier slack (select, lp-select)");
    app->add_option("--p", c.p, "entry-wise norm exponent (lp-select)");
    app->add_option("--trials", c.trials, "number of trials");
  }
  app->add_option("--seed", c.seed, "base seed");
  app->add_option("--in", c.in, "input file");
  app->add_option("--out", c.out, "output file (default stdout)");
  app->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_generator(CLI::App* app, GenOptions& g) {
  app->add_option("--d", g.d, "rows of a generated instance");
  app->add_option("--n", g.n, "columns (or vertices for graphs)");
  app->add_option("--sigma", g.sigma, "inlier noise level");
  app->add_option("--mode", g.mode, "gaussian-far | low-rank-decoy | orthogonal-pad");
  app->add_option("--outlier-scale", g.outlier_scale, "outlier norm relative to inliers");
}

// Writes to --out or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw FormatError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::optional<fs::path> truth_sidecar(const std::string& in) {
  fs::path p = in + ".truth.json";
  if (fs::exists(p)) return p;
  return std::nullopt;
}

PlantedSpec planted_spec(const GenOptions& g, const Common& c) {
  PlantedSpec s;
  s.d = g.d;
  s.n = g.n;
  s.k = c.k;
  s.m = c.m;
  s.sigma = g.sigma;
  s.mode = parse_outlier_mode(g.mode);
  s.seed = c.seed;
  s.outlier_scale = g.outlier_scale;
  return s;
}

int run_solve(const Common& c, const GenOptions& g) {
  ExperimentConfig cfg;
  if (!c.in.empty()) {
    cfg.instance_path = c.in;
    cfg.truth_path = truth_sidecar(c.in);
  }
  cfg.generator = planted_spec(g, c);
  cfg.algorithm = parse_algorithm(c.algo);
  cfg.params = c.params();
  cfg.trials = c.trials;
  const Report report = run_experiment(cfg);
  Sink sink(c.out);
  if (c.format == "csv") {
    write_report_csv(sink.get(), report);
  } else {
    write_report_jsonl(sink.get(), report);
  }
  for (const auto& t : report.trials) {
    if (t.status == "ERROR") {
      std::cerr << "trial " << t.trial << ": " << t.message << '\n';
      return kExitError;
    }
  }
  return report.hard_failure ? kExitGuarantee : kExitOk;
}

DenseMatrix require_matrix(const Common& c) {
  if (c.in.empty()) throw ParameterError("--in is required");
  return load_matrix(c.in);
}

int run_oracle(const Common& c, std::uint64_t guard) {
  const DenseMatrix a = require_matrix(c);
  const OracleResult r = brute_force_opt(a, c.k, c.m, guard);
  json j = to_json(r);
  j["k"] = c.k;
  j["m"] = c.m;
  Sink(c.out).get() << j.dump(2) << '\n';
  return kExitOk;
}

int run_sweep(const Common& c) {
  const DenseMatrix a = require_matrix(c);
  const Algorithm algo = parse_algorithm(c.algo);
  Sink sink(c.out);
  if (algo == Algorithm::iter_svd) {
    const IterSvdSweep s = iterative_svd_sweep(a, c.k, c.m, c.epsilon);
    sink.get() << to_json(s).dump(2) << '\n';
    return kExitOk;
  }
  if (algo == Algorithm::lp_select) {
    const LpSweep s = lp_select_sweep(a, c.m, c.k, c.delta, c.p, c.epsilon, c.seed);
    sink.get() << to_json(s).dump(2) << '\n';
    return kExitOk;
  }
  throw ParameterError("sweep supports --algo iter-svd or lp-select");
}

Graph graph_from(const GenOptions& g, const Common& c) {
  if (!g.graph.empty()) return load_graph(g.graph);
  return erdos_renyi(g.n, g.edge_prob, c.seed);
}

int run_gen(const Common& c, const GenOptions& g) {
  if (c.out.empty()) throw ParameterError("--out is required");
  if (g.kind == "planted") {
    const PlantedInstance inst = planted_instance(planted_spec(g, c));
    save_instance(c.out, inst);
  } else if (g.kind == "graph") {
    save_graph(c.out, erdos_renyi(g.n, g.edge_prob, c.seed));
  } else if (g.kind == "sse") {
    save_matrix(c.out, sse_gadget(graph_from(g, c)));
  } else if (g.kind == "sres") {
    const SrEsInstance inst = sres_gadget(graph_from(g, c), g.r);
    save_matrix(c.out, inst.a);
    std::ofstream meta(c.out + ".meta.json");
    meta << json{{"m", inst.m}, {"r", g.r}}.dump(2) << '\n';
  } else {
    throw ParameterError("unknown --kind '" + g.kind + "'");
  }
  return kExitOk;
}

int run_lemma2(const Common& c, const Lemma2Config& base, std::optional<double> min_lower) {
  Lemma2Config cfg = base;
  cfg.seed = c.seed;
  const CoverageTrialStats s = validate_lemma2(cfg);
  json j = to_json(s);
  bool ok = true;
  if (min_lower) {
    ok = s.lower_bound_99 >= *min_lower;
    j["min_lower_bound"] = *min_lower;
    j["passed"] = ok;
  }
  Sink(c.out).get() << j.dump(2) << '\n';
  return ok ? kExitOk : kExitGuarantee;
}

int run_lemma5(const Common& c, const GenOptions& g, Index subsets) {
  const Graph graph = c.in.empty() ? erdos_renyi(g.n, g.edge_prob, c.seed) : load_graph(c.in);
  const Lemma5Summary s = validate_lemma5(graph, subsets, c.seed);
  json j = to_json(s);
  j["n_vertices"] = graph.n_vertices();
  j["n_edges"] = graph.n_edges();
  Sink(c.out).get() << j.dump(2) << '\n';
  return s.passed() ? kExitOk : kExitGuarantee;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-criteria low-rank approximation with outlier columns"};
  app.require_subcommand(1);

  Common solve_c, oracle_c, gen_c, sweep_c, l2_c, l5_c;
  GenOptions solve_g, gen_g, l5_g;

  auto* solve = app.add_subcommand("solve", "run a solver over seeded trials and check its guarantees");
  add_common(solve, solve_c, true);
  add_generator(solve, solve_g);

  std::uint64_t guard = kBruteForceGuard;
  auto* oracle = app.add_subcommand("oracle", "exact optimum by enumerating outlier sets");
  add_common(oracle, oracle_c, true);
  oracle->add_option("--guard", guard, "maximum number of outlier sets to enumerate");

  auto* gen = app.add_subcommand("gen", "generate a planted instance, graph or gadget matrix");
  add_common(gen, gen_c, true);
  add_generator(gen, gen_g);
  gen->add_option("--kind", gen_g.kind, "planted | graph | sse | sres")
      ->check(CLI::IsMember({"planted", "graph", "sse", "sres"}));
  gen->add_option("--edge-prob", gen_g.edge_prob, "edge probability for random graphs");
  gen->add_option("--graph", gen_g.graph, "graph file for sse/sres (default: random graph)");
  gen->add_option("--r", gen_g.r, "edge target for sres");

  auto* sweep = app.add_subcommand("sweep", "run the guess-ladder sweep on one matrix");
  add_common(sweep, sweep_c, true);

  Lemma2Config l2;
  std::optional<double> l2_min;
  auto* lemma2 = app.add_subcommand("validate-lemma2", "Monte-Carlo estimate of the coverage probability");
  add_common(lemma2, l2_c, false);
  lemma2->add_option("--d", l2.d);
  lemma2->add_option("--n", l2.n);
  lemma2->add_option("--k", l2.k);
  lemma2->add_option("--epsilon", l2.epsilon);
  lemma2->add_option("--sigma", l2.sigma);
  lemma2->add_option("--trials", l2.trials);
  lemma2->add_option("--min-lower-bound", l2_min, "exit 2 if the 99% lower bound falls below this");

  Index l5_subsets = 200;
  auto* lemma5 = app.add_subcommand("validate-lemma5", "check the edge-subspace rank sandwich on a graph");
  add_common(lemma5, l5_c, false);
  lemma5->add_option("--n", l5_g.n, "vertices of the random graph when --in is absent");
  lemma5->add_option("--edge-prob", l5_g.edge_prob);
  lemma5->add_option("--subsets", l5_subsets, "random subsets when the graph has more than 12 edges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*solve) return run_solve(solve_c, solve_g);
    if (*oracle) return run_oracle(oracle_c, guard);
    if (*gen) return run_gen(gen_c, gen_g);
    if (*sweep) return run_sweep(sweep_c);
    if (*lemma2) return run_lemma2(l2_c, l2, l2_min);
    if (*lemma5) return run_lemma5(l5_c, l5_g, l5_subsets);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
