#pragma once

//
// Text and JSON formats.
//
// Matrix text: first line "d n", then n lines with the d entries of one
// column each, written with 17 significant digits.
// Graph text: first line "n_vertices n_edges", then one "i j" pair per line.
// Partition JSON: {"n": n, "outliers": [...]}, inliers implicit.
//

#include "robpca/instances.hpp"
#include "robpca/iterative_svd.hpp"
#include "robpca/lp.hpp"
#include "robpca/matrix.hpp"
#include "robpca/oracle.hpp"
#include "robpca/sampling.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>

namespace robpca {

using json = nlohmann::json;

void write_matrix(std::ostream& out, const DenseMatrix& m);
DenseMatrix read_matrix(std::istream& in);
void save_matrix(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix load_matrix(const std::filesystem::path& path);

void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);
void save_graph(const std::filesystem::path& path, const Graph& g);
Graph load_graph(const std::filesystem::path& path);

json to_json(const Partition& part);
Partition partition_from_json(const json& j);

json to_json(const IterSvdOutcome& outcome);
json to_json(const IterSvdSweep& sweep);
json to_json(const SelectResult& result);
json to_json(const LpSweep& sweep);
json to_json(const OracleResult& result);

// Truth sidecar written next to an exported instance matrix.
json truth_to_json(const PlantedInstance& inst);

// Writes <path> (matrix text) and <path>.truth.json.
void save_instance(const std::filesystem::path& path, const PlantedInstance& inst);

}  // namespace robpca
