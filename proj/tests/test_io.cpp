#include "helpers.hpp"
#include "robpca/errors.hpp"
#include "robpca/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace robpca;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("robpca_io_" + name);
}

}  // namespace

TEST(MatrixText, RoundTripIsBitExact) {
  Eigen::MatrixXd g = testutil::gaussian(4, 7, 3);
  g(0, 0) = 1e-300;
  g(1, 1) = -123456789.123456789;
  g(2, 2) = 0.1;
  const DenseMatrix a(g);
  std::stringstream ss;
  write_matrix(ss, a);
  EXPECT_TRUE(read_matrix(ss) == a);
}

TEST(MatrixText, LayoutIsOneColumnPerLine) {
  std::stringstream ss;
  write_matrix(ss, DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}}));
  EXPECT_EQ(ss.str(), "3 2\n1 3 5\n2 4 6\n");
}

TEST(MatrixText, RejectsMalformedInput) {
  for (const char* bad : {"", "2", "2 x\n", "-1 2\n", "2 1\n1\n", "2 1\n1 abc\n", "2 1\n1 2 3\n", "1 1\n1e999\n",
                          "1 1\nnan\n", "1 1\n1.5q\n"}) {
    std::stringstream ss(bad);
    EXPECT_ANY_THROW(read_matrix(ss)) << "input: " << bad;
  }
  std::stringstream empty("0 0\n");
  EXPECT_EQ(read_matrix(empty).cols(), 0);
}

TEST(MatrixText, FileRoundTrip) {
  const auto p = temp_path("m.txt");
  const DenseMatrix a(testutil::gaussian(3, 3, 1));
  save_matrix(p, a);
  EXPECT_TRUE(load_matrix(p) == a);
  EXPECT_THROW(load_matrix(temp_path("missing.txt")), FormatError);
}

TEST(GraphText, RoundTripAndErrors) {
  const Graph g = erdos_renyi(10, 0.3, 2);
  std::stringstream ss;
  write_graph(ss, g);
  const Graph back = read_graph(ss);
  EXPECT_EQ(back.n_vertices(), 10);
  EXPECT_EQ(back.edges(), g.edges());
  std::stringstream tri("3 3\n0 1\n1 2\n0 2\n");
  EXPECT_EQ(read_graph(tri).n_edges(), 3);
  std::stringstream shortg("3 2\n0 1\n");
  EXPECT_THROW(read_graph(shortg), FormatError);
  std::stringstream loop("3 1\n1 1\n");
  EXPECT_ANY_THROW(read_graph(loop));
}

TEST(PartitionJson, RoundTrip) {
  const Partition p = Partition::from_outliers(6, {4, 1});
  const json j = to_json(p);
  EXPECT_EQ(j.dump(), R"({"n":6,"outliers":[1,4]})");
  EXPECT_EQ(partition_from_json(j), p);
  EXPECT_THROW(partition_from_json(json{{"n", 3}}), FormatError);
  EXPECT_THROW(partition_from_json(json{{"n", 3}, {"outliers", {5}}}), std::exception);
}

TEST(InstanceExport, WritesMatrixAndTruthSidecar) {
  PlantedSpec spec;
  spec.d = 4;
  spec.n = 9;
  spec.k = 1;
  spec.m = 2;
  spec.sigma = 0.1;
  spec.seed = 5;
  const PlantedInstance inst = planted_instance(spec);
  const auto p = temp_path("inst.txt");
  save_instance(p, inst);
  EXPECT_TRUE(load_matrix(p) == inst.a);
  std::ifstream in(p.string() + ".truth.json");
  const json truth = json::parse(in);
  EXPECT_EQ(partition_from_json(truth), inst.truth);
  EXPECT_EQ(truth.at("k").get<Index>(), 1);
  EXPECT_DOUBLE_EQ(truth.at("opt_hint").get<double>(), inst.opt_hint.value());
}

TEST(OutcomeJson, CarriesStatusOutliersDimensionTraceRounds) {
  const DenseMatrix a(testutil::gaussian(4, 8, 2));
  const IterSvdOutcome o = iterative_svd(a, 1, 1, 0.5, 0.5 * a.squared_norm());
  const json j = to_json(o);
  for (const char* key : {"status", "outliers", "basis_dim", "mu_trace", "rounds"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("status"), "SUCCESS");
}

TEST(SelectJson, CarriesOutliersChosenAndRounds) {
  Rng rng(1);
  const SelectResult r = select(DenseMatrix(testutil::gaussian(4, 60, 3)), 2, 1, 1.0, 0.5, rng);
  const json j = to_json(r);
  for (const char* key : {"outliers", "chosen_columns", "rounds", "covered", "depth"}) EXPECT_TRUE(j.contains(key)) << key;
}
