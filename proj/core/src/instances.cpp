#include "robpca/instances.hpp"

#include "robpca/errors.hpp"
#include "robpca/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

namespace robpca {

const char* to_string(OutlierMode mode) {
  switch (mode) {
    case OutlierMode::gaussian_far: return "gaussian-far";
    case OutlierMode::low_rank_decoy: return "low-rank-decoy";
    case OutlierMode::orthogonal_pad: return "orthogonal-pad";
  }
  return "unknown";
}

OutlierMode parse_outlier_mode(std::string_view name) {
  if (name == "gaussian-far") return OutlierMode::gaussian_far;
  if (name == "low-rank-decoy") return OutlierMode::low_rank_decoy;
  if (name == "orthogonal-pad") return OutlierMode::orthogonal_pad;
  throw ParameterError("unknown outlier mode '" + std::string(name) + "'");
}

namespace {

Eigen::MatrixXd gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = dist(rng);
  }
  return g;
}

Eigen::MatrixXd random_orthonormal(Index d, Index k, Rng& rng) {
  if (k == 0) return Eigen::MatrixXd(d, 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(d, k, rng));
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(d, k);
  q.applyOnTheLeft(qr.householderQ());
  return q;
}

// Columns of a gaussian_far instance in `d` rows; returns outlier positions.
Eigen::MatrixXd planted_block(Index d, Index n, Index k, Index m, double sigma, OutlierMode mode,
                              double outlier_scale, Rng& rng, Eigen::MatrixXd& basis,
                              std::vector<Index>& outliers) {
  basis = random_orthonormal(d, k, rng);
  Eigen::MatrixXd a = basis * gaussian(k, n, rng);
  if (sigma > 0.0) a += sigma * gaussian(d, n, rng);

  outliers = sample_without_replacement(n, m, rng);
  std::sort(outliers.begin(), outliers.end());
  const double inlier_norm = std::sqrt(static_cast<double>(k) + static_cast<double>(d) * sigma * sigma);
  const double target = outlier_scale * std::max(inlier_norm, 1.0);
  if (mode == OutlierMode::low_rank_decoy) {
    const Eigen::MatrixXd decoy = random_orthonormal(d, std::max<Index>(k, 1), rng);
    for (Index o : outliers) {
      Eigen::VectorXd v = decoy * gaussian(decoy.cols(), 1, rng);
      v *= outlier_scale;
      if (sigma > 0.0) v += sigma * gaussian(d, 1, rng);
      a.col(o) = v;
    }
  } else {
    for (Index o : outliers) {
      Eigen::VectorXd v = gaussian(d, 1, rng);
      const double norm = v.norm();
      a.col(o) = norm > 0.0 ? Eigen::VectorXd(v * (target / norm)) : Eigen::VectorXd::Constant(d, target);
    }
  }
  return a;
}

}  // namespace

PlantedInstance planted_instance(const PlantedSpec& spec) {
  if (spec.d <= 0 || spec.n < 0) throw ParameterError("planted_instance: d must be positive, n nonnegative");
  if (spec.k < 0 || spec.k > spec.d) throw ParameterError("planted_instance: need 0 <= k <= d");
  if (spec.m < 0 || spec.m > spec.n) throw ParameterError("planted_instance: need 0 <= m <= n");
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) throw ParameterError("planted_instance: sigma must be >= 0");
  if (!(spec.outlier_scale > 0.0)) throw ParameterError("planted_instance: outlier_scale must be positive");

  Rng rng(spec.seed);
  PlantedInstance inst;
  inst.noise_sigma = spec.sigma;
  inst.k = spec.k;

  std::vector<Index> outliers;
  Eigen::MatrixXd basis;
  Eigen::MatrixXd values;
  if (spec.mode == OutlierMode::orthogonal_pad) {
    const Index pads = spec.n / 2;
    const Index core_n = spec.n - pads;
    if (spec.d < 2 || spec.k > spec.d - 1) throw ParameterError("orthogonal-pad needs d >= 2 and k <= d - 1");
    if (pads <= spec.m || core_n < spec.m) {
      throw ParameterError("orthogonal-pad needs n/2 > m and n - n/2 >= m");
    }
    Eigen::MatrixXd core_basis;
    const Eigen::MatrixXd core = planted_block(spec.d - 1, core_n, spec.k, spec.m, spec.sigma,
                                               OutlierMode::gaussian_far, spec.outlier_scale, rng,
                                               core_basis, outliers);
    values = Eigen::MatrixXd::Zero(spec.d, spec.n);
    values.topLeftCorner(spec.d - 1, core_n) = core;
    const double pad_value = std::sqrt(core.squaredNorm() + 1.0);
    for (Index j = core_n; j < spec.n; ++j) {
      values(spec.d - 1, j) = pad_value;
      inst.pad_columns.push_back(j);
    }
    inst.pad_row = spec.d - 1;
    basis = Eigen::MatrixXd::Zero(spec.d, spec.k);
    basis.topRows(spec.d - 1) = core_basis;
  } else {
    values = planted_block(spec.d, spec.n, spec.k, spec.m, spec.sigma, spec.mode, spec.outlier_scale,
                           rng, basis, outliers);
  }

  inst.a = DenseMatrix(std::move(values));
  inst.truth = Partition::from_outliers(spec.n, std::move(outliers));
  inst.planted_space = Subspace::from_orthonormal(std::move(basis));
  inst.opt_hint = objective_error(inst.a, inst.truth, spec.k);
  return inst;
}

Graph::Graph(Index n_vertices, std::vector<Edge> edges) : n_vertices_(n_vertices) {
  if (n_vertices < 0) throw ParameterError("graph: negative vertex count");
  std::set<Edge> seen;
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first == e.second) throw ParameterError("graph: self-loop at vertex " + std::to_string(e.first));
    if (e.first < 0 || e.second >= n_vertices) throw ParameterError("graph: endpoint out of range");
    if (!seen.insert(e).second) {
      throw ParameterError("graph: duplicate edge {" + std::to_string(e.first) + "," +
                           std::to_string(e.second) + "}");
    }
  }
  edges_ = std::move(edges);
}

Graph erdos_renyi(Index n_vertices, double edge_prob, std::uint64_t seed) {
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw ParameterError("edge probability must lie in [0, 1]");
  Rng rng(seed);
  std::bernoulli_distribution coin(edge_prob);
  std::vector<Graph::Edge> edges;
  for (Index i = 0; i < n_vertices; ++i) {
    for (Index j = i + 1; j < n_vertices; ++j) {
      if (coin(rng)) edges.emplace_back(i, j);
    }
  }
  return Graph(n_vertices, std::move(edges));
}

Graph path_graph(Index n_vertices) {
  std::vector<Graph::Edge> edges;
  for (Index i = 0; i + 1 < n_vertices; ++i) edges.emplace_back(i, i + 1);
  return Graph(n_vertices, std::move(edges));
}

Graph cycle_graph(Index n_vertices) {
  if (n_vertices < 3) throw ParameterError("cycle needs at least 3 vertices");
  std::vector<Graph::Edge> edges;
  for (Index i = 0; i < n_vertices; ++i) edges.emplace_back(i, (i + 1) % n_vertices);
  return Graph(n_vertices, std::move(edges));
}

Graph star_graph(Index leaves) {
  std::vector<Graph::Edge> edges;
  for (Index i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph(leaves + 1, std::move(edges));
}

Graph complete_graph(Index n_vertices) {
  std::vector<Graph::Edge> edges;
  for (Index i = 0; i < n_vertices; ++i) {
    for (Index j = i + 1; j < n_vertices; ++j) edges.emplace_back(i, j);
  }
  return Graph(n_vertices, std::move(edges));
}

DenseMatrix sse_gadget(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n_vertices(), g.n_edges());
  for (Index e = 0; e < g.n_edges(); ++e) {
    const auto& [i, j] = g.edges()[static_cast<std::size_t>(e)];
    a(i, e) = 1.0;
    a(j, e) = 1.0;
  }
  return DenseMatrix(std::move(a));
}

EdgeSubspaceCheck verify_edge_subspace_bound(const Graph& g, std::span<const Index> edge_subset) {
  std::set<Index> distinct;
  std::set<Index> touched;
  Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(g.n_vertices(), static_cast<Index>(edge_subset.size()));
  Index col = 0;
  for (Index e : edge_subset) {
    if (e < 0 || e >= g.n_edges()) throw ParameterError("edge index out of range");
    if (!distinct.insert(e).second) throw ParameterError("edge subset has duplicates");
    const auto& [i, j] = g.edges()[static_cast<std::size_t>(e)];
    touched.insert(i);
    touched.insert(j);
    sub(i, col) = 1.0;
    sub(j, col) = 1.0;
    ++col;
  }
  EdgeSubspaceCheck out;
  out.n_prime = static_cast<Index>(touched.size());
  out.rank = numerical_rank(DenseMatrix(std::move(sub)));
  out.holds = (out.n_prime + 1) / 2 <= out.rank && out.rank <= out.n_prime;
  return out;
}

SrEsInstance sres_gadget(const Graph& g, Index r) {
  if (r < 0 || r > g.n_edges()) throw ParameterError("r must lie in [0, |E|]");
  return {sse_gadget(g), g.n_edges() - r};
}

}  // namespace robpca
