#pragma once

#include "robpca/matrix.hpp"
#include "robpca/oracle.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace robpca {

enum class OutlierMode {
  gaussian_far,    // large random directions
  low_rank_decoy,  // outliers near a second, unrelated rank-k space
  orthogonal_pad,  // gaussian_far core block plus copies of an orthogonal direction
};

const char* to_string(OutlierMode mode);
OutlierMode parse_outlier_mode(std::string_view name);

struct PlantedSpec {
  Index d = 10;
  Index n = 50;
  Index k = 2;
  Index m = 5;
  double sigma = 0.0;
  OutlierMode mode = OutlierMode::gaussian_far;
  std::uint64_t seed = 0;
  // Outlier (or decoy) norm relative to a typical inlier.
  double outlier_scale = 10.0;
};

struct PlantedInstance {
  DenseMatrix a;
  Partition truth;
  Subspace planted_space;
  double noise_sigma = 0.0;
  Index k = 0;
  SquaredError opt_hint;  // err_k of the true inliers, recomputed
  // orthogonal_pad only: the padding columns (inliers) and the padded row.
  std::vector<Index> pad_columns;
  Index pad_row = -1;
};

// Inliers are U c + N(0, sigma^2) noise with U a random orthonormal d x k
// basis and c ~ N(0, I_k); the m outlier positions are uniform. In
// orthogonal_pad mode row d-1 is reserved: the first n - n/2 columns form a
// gaussian_far instance in the other d-1 rows and the last n/2 columns are
// copies of a multiple of e_{d-1} heavy enough to dominate the spectrum.
PlantedInstance planted_instance(const PlantedSpec& spec);

// Undirected simple graph.
class Graph {
 public:
  using Edge = std::pair<Index, Index>;

  Graph() = default;
  // Normalises each edge to (min, max); throws on self-loops, duplicates or
  // endpoints outside [0, n_vertices).
  Graph(Index n_vertices, std::vector<Edge> edges);

  Index n_vertices() const { return n_vertices_; }
  Index n_edges() const { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  Index n_vertices_ = 0;
  std::vector<Edge> edges_;
};

Graph erdos_renyi(Index n_vertices, double edge_prob, std::uint64_t seed);
Graph path_graph(Index n_vertices);
Graph cycle_graph(Index n_vertices);
Graph star_graph(Index leaves);
Graph complete_graph(Index n_vertices);

// |V| x |E| matrix whose column for edge {i, j} is e_i + e_j.
DenseMatrix sse_gadget(const Graph& g);

struct EdgeSubspaceCheck {
  Index n_prime = 0;  // vertices touched by the subset
  Index rank = 0;     // dim span of the subset's edge vectors
  bool holds = false; // ceil(n'/2) <= rank <= n'
};

// edge_subset holds distinct indices into g.edges().
EdgeSubspaceCheck verify_edge_subspace_bound(const Graph& g, std::span<const Index> edge_subset);

struct SrEsInstance {
  DenseMatrix a;
  Index m = 0;  // |E| - r
};

SrEsInstance sres_gadget(const Graph& g, Index r);

}  // namespace robpca
