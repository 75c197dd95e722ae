#include "helpers.hpp"
#include "oracles.hpp"
#include "robpca/errors.hpp"
#include "robpca/harness.hpp"
#include "robpca/instances.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace robpca;

namespace {

std::vector<std::vector<std::int64_t>> gadget_ints(const DenseMatrix& m) {
  std::vector<std::vector<std::int64_t>> out(static_cast<std::size_t>(m.rows()),
                                             std::vector<std::int64_t>(static_cast<std::size_t>(m.cols())));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<std::int64_t>(m(i, j));
  }
  return out;
}

PlantedSpec spec_of(Index d, Index n, Index k, Index m, double sigma, OutlierMode mode, std::uint64_t seed) {
  PlantedSpec s;
  s.d = d;
  s.n = n;
  s.k = k;
  s.m = m;
  s.sigma = sigma;
  s.mode = mode;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Planted, DeterministicPerSeed) {
  const auto s = spec_of(6, 20, 2, 3, 0.1, OutlierMode::gaussian_far, 9);
  const PlantedInstance x = planted_instance(s);
  const PlantedInstance y = planted_instance(s);
  EXPECT_TRUE(x.a == y.a);
  EXPECT_EQ(x.truth, y.truth);
  auto s2 = s;
  s2.seed = 10;
  EXPECT_FALSE(planted_instance(s2).a == x.a);
}

TEST(Planted, OptHintMatchesIndependentRecomputation) {
  for (OutlierMode mode : {OutlierMode::gaussian_far, OutlierMode::low_rank_decoy, OutlierMode::orthogonal_pad}) {
    const PlantedInstance inst = planted_instance(spec_of(6, 20, 2, 3, 0.2, mode, 4));
    EXPECT_EQ(static_cast<Index>(inst.truth.outliers().size()), 3);
    EXPECT_EQ(inst.planted_space.dim(), 2);
    const double ref = oracle::err_k(oracle::columns(inst.a.values(), inst.truth.inliers()), 2);
    EXPECT_LE(std::abs(inst.opt_hint.value() - ref), 1e-9 * std::max(ref, 1e-12));
  }
}

TEST(Planted, NoNoiseNoOutliersHasZeroOptimum) {
  const PlantedInstance inst = planted_instance(spec_of(6, 20, 2, 0, 0.0, OutlierMode::gaussian_far, 1));
  EXPECT_LT(inst.opt_hint.value(), 1e-20 * inst.a.squared_norm());
}

TEST(Planted, BruteForceRecoversGaussianFarOutliersWithoutNoise) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PlantedInstance inst = planted_instance(spec_of(6, 10, 2, 2, 0.0, OutlierMode::gaussian_far, seed));
    const OracleResult r = brute_force_opt(inst.a, 2, 2);
    EXPECT_EQ(r.part, inst.truth) << "seed " << seed;
    EXPECT_LT(r.opt.value(), 1e-20 * inst.a.squared_norm());
  }
}

TEST(Planted, LowRankDecoyRecordsObjective) {
  auto s = spec_of(6, 10, 1, 3, 0.01, OutlierMode::low_rank_decoy, 2);
  s.outlier_scale = 100.0;
  const PlantedInstance inst = planted_instance(s);
  const OracleResult r = brute_force_opt(inst.a, 1, 3);
  EXPECT_LE(r.opt.value(), inst.opt_hint.value() * (1.0 + 1e-9));
}

TEST(Planted, OrthogonalPadKeepsOptimumWhenRankGrowsByOne) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const PlantedInstance inst = planted_instance(spec_of(5, 12, 1, 2, 0.1, OutlierMode::orthogonal_pad, seed));
    ASSERT_EQ(inst.pad_columns.size(), 6u);
    std::vector<Index> core_cols;
    for (Index j = 0; j < 6; ++j) core_cols.push_back(j);
    Eigen::MatrixXd core = inst.a.select_columns(core_cols).values().topRows(4);
    const double base = brute_force_opt(DenseMatrix(core), 1, 2).opt.value();
    const double padded = brute_force_opt(inst.a, 2, 2).opt.value();
    EXPECT_LE(std::abs(base - padded), 1e-9 * std::max(base, 1e-12)) << "seed " << seed;
  }
}

TEST(Planted, ParameterErrors) {
  EXPECT_THROW(planted_instance(spec_of(3, 10, 4, 1, 0.0, OutlierMode::gaussian_far, 1)), ParameterError);
  EXPECT_THROW(planted_instance(spec_of(3, 10, 1, 11, 0.0, OutlierMode::gaussian_far, 1)), ParameterError);
  EXPECT_THROW(planted_instance(spec_of(3, 10, 1, 1, -1.0, OutlierMode::gaussian_far, 1)), ParameterError);
  EXPECT_THROW(planted_instance(spec_of(3, 10, 1, 5, 0.0, OutlierMode::orthogonal_pad, 1)), ParameterError);
  EXPECT_THROW(parse_outlier_mode("nope"), ParameterError);
  EXPECT_EQ(parse_outlier_mode("low-rank-decoy"), OutlierMode::low_rank_decoy);
}

TEST(Graph, ValidatesEdges) {
  EXPECT_THROW(Graph(3, {{0, 0}}), ParameterError);
  EXPECT_THROW(Graph(3, {{0, 3}}), ParameterError);
  EXPECT_THROW(Graph(3, {{0, 1}, {1, 0}}), ParameterError);
  const Graph g(3, {{2, 1}});
  EXPECT_EQ(g.edges()[0], (Graph::Edge{1, 2}));
}

TEST(Graph, Generators) {
  EXPECT_EQ(path_graph(4).n_edges(), 3);
  EXPECT_EQ(cycle_graph(5).n_edges(), 5);
  EXPECT_EQ(star_graph(3).n_vertices(), 4);
  EXPECT_EQ(complete_graph(5).n_edges(), 10);
  EXPECT_EQ(erdos_renyi(10, 0.0, 1).n_edges(), 0);
  EXPECT_EQ(erdos_renyi(10, 1.0, 1).n_edges(), 45);
  EXPECT_EQ(erdos_renyi(30, 0.2, 7).edges(), erdos_renyi(30, 0.2, 7).edges());
}

TEST(SseGadget, ColumnsAreEdgeIndicators) {
  const DenseMatrix single = sse_gadget(Graph(2, {{0, 1}}));
  EXPECT_EQ(single.rows(), 2);
  EXPECT_EQ(single(0, 0), 1.0);
  EXPECT_EQ(single(1, 0), 1.0);
  const DenseMatrix g = sse_gadget(erdos_renyi(12, 0.4, 3));
  for (double c : column_sq_norms(g)) EXPECT_EQ(c, 2.0);
}

TEST(SseGadget, TriangleAndStarRanks) {
  const DenseMatrix tri = sse_gadget(cycle_graph(3));
  EXPECT_EQ(numerical_rank(tri), 3);
  EXPECT_EQ(oracle::bareiss_rank(gadget_ints(tri)), 3);
  EXPECT_NEAR(std::abs(tri.values().determinant()), 2.0, 1e-12);
  const Graph star = star_graph(3);
  const std::vector<Index> all{0, 1, 2};
  const EdgeSubspaceCheck c = verify_edge_subspace_bound(star, all);
  EXPECT_EQ(c.n_prime, 4);
  EXPECT_EQ(c.rank, 3);
  EXPECT_TRUE(c.holds);
}

TEST(EdgeSubspace, EmptyAndSingleEdge) {
  const Graph g = path_graph(4);
  const EdgeSubspaceCheck e = verify_edge_subspace_bound(g, std::vector<Index>{});
  EXPECT_EQ(e.n_prime, 0);
  EXPECT_EQ(e.rank, 0);
  EXPECT_TRUE(e.holds);
  const EdgeSubspaceCheck one = verify_edge_subspace_bound(g, std::vector<Index>{1});
  EXPECT_EQ(one.n_prime, 2);
  EXPECT_EQ(one.rank, 1);
  EXPECT_TRUE(one.holds);
  EXPECT_THROW(verify_edge_subspace_bound(g, std::vector<Index>{5}), ParameterError);
  EXPECT_THROW(verify_edge_subspace_bound(g, std::vector<Index>{1, 1}), ParameterError);
}

TEST(EdgeSubspace, RankMatchesBareissOnRandomSubsets) {
  const Graph g = erdos_renyi(30, 0.2, 5);
  const DenseMatrix full = sse_gadget(g);
  Rng rng(3);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 50; ++t) {
    std::vector<Index> subset;
    for (Index e = 0; e < g.n_edges(); ++e) {
      if (coin(rng)) subset.push_back(e);
    }
    const EdgeSubspaceCheck c = verify_edge_subspace_bound(g, subset);
    EXPECT_EQ(c.rank, oracle::bareiss_rank(gadget_ints(full.select_columns(subset))));
    EXPECT_TRUE(c.holds);
  }
}

TEST(EdgeSubspace, SpanningTreeHasRankNPrimeMinusOne) {
  // A path is a tree: bipartite, so its n' - 1 edge vectors are independent.
  for (Index v = 2; v <= 9; ++v) {
    const Graph g = path_graph(v);
    std::vector<Index> all(static_cast<std::size_t>(g.n_edges()));
    std::iota(all.begin(), all.end(), Index{0});
    const EdgeSubspaceCheck c = verify_edge_subspace_bound(g, all);
    EXPECT_EQ(c.rank, c.n_prime - 1);
    EXPECT_TRUE(c.holds);
  }
}

TEST(SresGadget, OutlierBudgetAndParameterErrors) {
  const SrEsInstance tri = sres_gadget(cycle_graph(3), 3);
  EXPECT_EQ(tri.m, 0);
  EXPECT_EQ(numerical_rank(tri.a), 3);
  EXPECT_THROW(sres_gadget(cycle_graph(3), 4), ParameterError);
}

TEST(SresGadget, PathWithTwoEdgesNeedsDimensionThree) {
  const Graph path = path_graph(4);
  const SrEsInstance inst = sres_gadget(path, 2);
  EXPECT_EQ(inst.m, 1);
  // Dropping one column leaves two edges touching three vertices: rank 2 is not enough.
  EXPECT_GT(brute_force_opt(inst.a, 1, 1).opt.value(), 0.5);
  EXPECT_LT(brute_force_opt(inst.a, 2, 1).opt.value(), 1e-20);
  Index min_rank = 99;
  for (Index drop = 0; drop < 3; ++drop) {
    std::vector<Index> keep;
    for (Index e = 0; e < 3; ++e) {
      if (e != drop) keep.push_back(e);
    }
    min_rank = std::min(min_rank, verify_edge_subspace_bound(path, keep).rank);
  }
  EXPECT_EQ(min_rank, 2);
}

TEST(SresGadget, EdgeEnumerationAgreesWithMatrixEnumeration) {
  // Smallest zero-error rank over outlier choices equals the smallest edge-subset rank.
  const Graph g = erdos_renyi(6, 0.5, 11);
  const Index r = std::min<Index>(3, g.n_edges());
  const SrEsInstance inst = sres_gadget(g, r);
  Index via_edges = 99;
  const Index ne = g.n_edges();
  for (std::uint32_t mask = 0; mask < (1u << ne); ++mask) {
    if (__builtin_popcount(mask) != r) continue;
    std::vector<Index> subset;
    for (Index e = 0; e < ne; ++e) {
      if (mask & (1u << e)) subset.push_back(e);
    }
    via_edges = std::min(via_edges, verify_edge_subspace_bound(g, subset).rank);
  }
  Index via_matrix = 0;
  while (brute_force_opt(inst.a, via_matrix, inst.m).opt.value() > 1e-18) ++via_matrix;
  EXPECT_EQ(via_edges, via_matrix);
}

TEST(EdgeRankValidation, ExhaustiveSmallGraphsPass) {
  for (const Graph& g : {cycle_graph(3), complete_graph(4), path_graph(6), star_graph(5)}) {
    const Lemma5Summary s = validate_lemma5(g, 0, 1);
    EXPECT_TRUE(s.exhaustive);
    EXPECT_EQ(s.checked, Index{1} << g.n_edges());
    EXPECT_TRUE(s.passed());
  }
}
