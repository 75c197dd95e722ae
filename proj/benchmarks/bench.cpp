#include "robpca/instances.hpp"
#include "robpca/iterative_svd.hpp"
#include "robpca/lp.hpp"
#include "robpca/sampling.hpp"

#include <benchmark/benchmark.h>

using namespace robpca;

namespace {

PlantedInstance make(Index d, Index n, Index k, Index m) {
  PlantedSpec s;
  s.d = d;
  s.n = n;
  s.k = k;
  s.m = m;
  s.sigma = 0.1;
  s.seed = 1;
  return planted_instance(s);
}

void BM_Svd(benchmark::State& state) {
  const auto inst = make(state.range(0), 4 * state.range(0), 3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(svd(inst.a));
}
BENCHMARK(BM_Svd)->Arg(16)->Arg(64)->Arg(128);

void BM_IterativeSvdSweep(benchmark::State& state) {
  const auto inst = make(30, state.range(0), 3, 10);
  for (auto _ : state) benchmark::DoNotOptimize(iterative_svd_sweep(inst.a, 3, 10, 0.5));
}
BENCHMARK(BM_IterativeSvdSweep)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SampleRound(benchmark::State& state) {
  const auto inst = make(40, state.range(0), 2, 20);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_round(inst.a, 20, 1, 1.0, inst.a.cols(), rng));
}
BENCHMARK(BM_SampleRound)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const auto inst = make(8, 12, 2, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_opt(inst.a, 2, state.range(0)));
}
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(2)->Arg(3);

void BM_LpResidual(benchmark::State& state) {
  const auto inst = make(20, 6, 2, 0);
  const Eigen::MatrixXd cols = inst.a.values().leftCols(4);
  const Eigen::VectorXd u = inst.a.col(5);
  const double p = static_cast<double>(state.range(0)) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(lp_residual(u, cols, p));
}
BENCHMARK(BM_LpResidual)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
