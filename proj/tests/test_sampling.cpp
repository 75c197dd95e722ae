#include "helpers.hpp"
#include "robpca/errors.hpp"
#include "robpca/instances.hpp"
#include "robpca/io.hpp"
#include "robpca/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace robpca;
using testutil::gaussian;

namespace {

void expect_exact_partition(const SelectResult& r, Index n) {
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (Index c : r.chosen_columns) ++seen[static_cast<std::size_t>(c)];
  for (Index c : r.covered) ++seen[static_cast<std::size_t>(c)];
  for (Index c : r.outliers) ++seen[static_cast<std::size_t>(c)];
  for (Index j = 0; j < n; ++j) EXPECT_EQ(seen[static_cast<std::size_t>(j)], 1) << "column " << j;
}

void expect_structural_bounds(const SelectResult& r, Index n, Index m, Index k, double eps, double delta) {
  EXPECT_LE(static_cast<double>(r.outliers.size()), (1.0 + delta) * static_cast<double>(m));
  EXPECT_LE(static_cast<double>(r.depth), select_depth_bound(n, m, eps, delta));
  EXPECT_LE(static_cast<double>(r.chosen_columns.size()), select_column_budget(n, m, k, eps, delta, r.final_n0));
  expect_exact_partition(r, n);
}

}  // namespace

TEST(CeilCount, AbsorbsRoundoff) {
  EXPECT_EQ(ceil_count(3.0), 3);
  EXPECT_EQ(ceil_count(3.0 + 1e-12), 3);
  EXPECT_EQ(ceil_count(3.5), 4);
  EXPECT_EQ(ceil_count(0.0), 0);
  EXPECT_EQ(ceil_count(0.125 * 0.5 * 360.0), 23);
}

TEST(SelectSizes, SampleSizeFormula) {
  EXPECT_EQ(select_sample_size(400, 40, 2, 0.5).value(), 143);  // ceil(400/360 * 128)
  EXPECT_EQ(select_sample_size(10, 0, 1, 1.0).value(), 8);
  EXPECT_FALSE(select_sample_size(5, 5, 1, 1.0).has_value());
  EXPECT_THROW(select_sample_size(10, 1, 1, 0.0), ParameterError);
}

TEST(SelectSizes, MarkedCountAndRepetitions) {
  EXPECT_EQ(select_marked_count(400, 40, 143, 0.5), 45);
  EXPECT_EQ(select_marked_count(150, 40, 143, 0.5), 7);
  EXPECT_EQ(select_repetitions(100, 1.0), static_cast<Index>(std::ceil(16.0 * std::log(100.0))));
  EXPECT_EQ(select_repetitions(1, 0.5), 1);
}

TEST(Sampling, WithoutReplacementIsDistinctAndSeeded) {
  Rng a(5), b(5);
  const auto x = sample_without_replacement(50, 20, a);
  const auto y = sample_without_replacement(50, 20, b);
  EXPECT_EQ(x, y);
  std::set<Index> s(x.begin(), x.end());
  EXPECT_EQ(s.size(), 20u);
  for (Index v : x) EXPECT_TRUE(v >= 0 && v < 50);
  EXPECT_EQ(sample_without_replacement(7, 7, a).size(), 7u);
  EXPECT_THROW(sample_without_replacement(3, 4, a), ParameterError);
}

TEST(Sampling, SubstreamsDifferPerRepetition) {
  Rng r0 = substream(123, 0);
  Rng r1 = substream(123, 1);
  EXPECT_NE(r0(), r1());
  Rng again = substream(123, 0);
  Rng r0b = substream(123, 0);
  EXPECT_EQ(again(), r0b());
}

TEST(SampleRound, IdenticalColumnsGiveZeroError) {
  Eigen::MatrixXd g(3, 30);
  for (Index j = 0; j < 30; ++j) g.col(j) = Eigen::Vector3d(1.0, -2.0, 0.5);
  Rng rng(1);
  const SampleRoundResult r = sample_round(DenseMatrix(g), 2, 1, 1.0, 30, rng);
  EXPECT_LT(r.error, 1e-20);
  const Index n0 = select_sample_size(30, 2, 1, 1.0).value();
  EXPECT_EQ(static_cast<Index>(r.marked.size()), select_marked_count(30, 2, n0, 1.0));
}

TEST(SampleRound, StandardBasisErrorAtMostMarkedCount) {
  const Index n = 40;
  const DenseMatrix a(Eigen::MatrixXd::Identity(n, n));
  Rng rng(2);
  const SampleRoundResult r = sample_round(a, 3, 1, 1.0, n, rng);
  const Index n0 = select_sample_size(n, 3, 1, 1.0).value();
  EXPECT_EQ(static_cast<Index>(r.sample.size()), n0);
  EXPECT_EQ(static_cast<Index>(r.marked.size()), select_marked_count(n, 3, n0, 1.0));
  EXPECT_LE(r.error, static_cast<double>(r.marked.size()));
  // Marked columns inside the sample have residual zero, the rest one.
  std::set<Index> sample(r.sample.begin(), r.sample.end());
  double expect = 0.0;
  for (Index c : r.marked) expect += sample.count(c) ? 0.0 : 1.0;
  EXPECT_NEAR(r.error, expect, 1e-12);
}

TEST(SampleRound, RejectsTooFewColumns) {
  Rng rng(3);
  EXPECT_THROW(sample_round(DenseMatrix(gaussian(3, 5, 1)), 1, 1, 1.0, 5, rng), ParameterError);
}

TEST(Select, AllOutliersWhenNAtMostOnePlusDeltaM) {
  Rng rng(1);
  // n0 = ceil(40/10 * 8) = 32 <= 40 <= (1 + 1) * 30.
  const SelectResult r = select(DenseMatrix(gaussian(4, 40, 1)), 30, 1, 1.0, 1.0, rng);
  EXPECT_EQ(r.outliers.size(), 40u);
  EXPECT_TRUE(r.chosen_columns.empty());
  EXPECT_EQ(r.depth, 1);
  expect_exact_partition(r, 40);
  // m = n leaves n0 undefined; everything is an outlier as well.
  const SelectResult all = select(DenseMatrix(gaussian(4, 6, 1)), 6, 1, 1.0, 0.5, rng);
  EXPECT_EQ(all.outliers.size(), 6u);
}

TEST(Select, AllChosenWhenNBelowN0) {
  Rng rng(1);
  const DenseMatrix a(gaussian(4, 12, 2));
  const SelectResult r = select(a, 1, 2, 0.5, 0.5, rng);
  EXPECT_EQ(r.chosen_columns.size(), 12u);
  EXPECT_TRUE(r.outliers.empty());
  EXPECT_LT(select_residual(a, r), 1e-20 * a.squared_norm());
}

TEST(Select, EmptyMatrixAndNoOutlierBudget) {
  Rng rng(1);
  const SelectResult e = select(DenseMatrix(3, 0), 0, 1, 0.5, 0.5, rng);
  EXPECT_TRUE(e.chosen_columns.empty() && e.outliers.empty() && e.covered.empty());
  const DenseMatrix a(gaussian(5, 60, 3));
  const SelectResult r = select(a, 0, 1, 1.0, 0.5, rng);
  EXPECT_TRUE(r.outliers.empty());
  expect_exact_partition(r, 60);
}

TEST(Select, ParameterErrors) {
  Rng rng(1);
  const DenseMatrix a(gaussian(3, 10, 1));
  EXPECT_THROW(select(a, 11, 1, 0.5, 0.5, rng), ParameterError);
  EXPECT_THROW(select(a, 1, 1, 1.5, 0.5, rng), ParameterError);
  EXPECT_THROW(select(a, 1, 1, 0.5, 0.0, rng), ParameterError);
}

TEST(Select, StructuralBoundsOnRandomRuns) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    PlantedSpec spec;
    spec.d = 6;
    spec.n = 120 + static_cast<Index>(seed) * 7;
    spec.k = 1;
    spec.m = 4 + static_cast<Index>(seed % 5);
    spec.sigma = 0.1;
    spec.seed = seed;
    const PlantedInstance inst = planted_instance(spec);
    const double eps = seed % 2 ? 1.0 : 0.8;
    const double delta = seed % 3 ? 0.5 : 1.0;
    Rng rng(seed);
    const SelectResult r = select(inst.a, spec.m, 1, eps, delta, rng);
    expect_structural_bounds(r, spec.n, spec.m, 1, eps, delta);
    for (const RoundRecord& rec : r.rounds) {
      const Index n0 = select_sample_size(rec.active, spec.m, 1, eps).value();
      EXPECT_EQ(rec.sample_size, n0);
      EXPECT_EQ(rec.marked, select_marked_count(rec.active, spec.m, n0, eps));
    }
  }
}

TEST(Select, DeterministicPerSeed) {
  const DenseMatrix a(gaussian(5, 150, 4));
  Rng r1(77), r2(77);
  EXPECT_EQ(to_json(select(a, 5, 1, 1.0, 0.5, r1)).dump(), to_json(select(a, 5, 1, 1.0, 0.5, r2)).dump());
}

TEST(Select, DepthBoundAndBudgetFormulas) {
  EXPECT_DOUBLE_EQ(select_depth_bound(400, 40, 0.5, 0.5), std::ceil(std::log(20.0) / 0.125) + 1.0);
  EXPECT_TRUE(std::isinf(select_depth_bound(400, 0, 0.5, 0.5)));
  EXPECT_DOUBLE_EQ(select_column_budget(400, 40, 2, 0.5, 0.5, 10), 32.0 * 64.0 * (std::log2(10.0) + 4.0) + 10.0);
}

TEST(CoverageTrial, ExactRankKAlwaysSucceeds) {
  const DenseMatrix a(testutil::low_rank(10, 50, 1, 6));
  Rng rng(8);
  for (int t = 0; t < 20; ++t) EXPECT_TRUE(coverage_trial(a, 1, 1.0, rng));
}

TEST(CoverageTrial, SampleOfEverythingIsVacuouslyTrue) {
  const DenseMatrix a(gaussian(10, 16, 6));
  Rng rng(8);
  EXPECT_TRUE(coverage_trial(a, 1, 0.5, rng));  // n = 4k/eps^2 = 16
}

TEST(CoverageTrial, TooFewColumnsThrows) {
  Rng rng(8);
  EXPECT_THROW(coverage_trial(DenseMatrix(gaussian(10, 15, 6)), 1, 0.5, rng), ParameterError);
}
