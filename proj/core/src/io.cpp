#include "robpca/io.hpp"

#include "robpca/errors.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace robpca {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i > 0) out << ' ';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
}

DenseMatrix read_matrix(std::istream& in) {
  Index d = -1;
  Index n = -1;
  if (!(in >> d >> n) || d < 0 || n < 0) throw FormatError("matrix header must be 'd n'");
  Eigen::MatrixXd values(d, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < d; ++i) {
      std::string token;
      if (!(in >> token)) {
        throw FormatError("matrix text ended early at column " + std::to_string(j));
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        throw FormatError("bad matrix entry '" + token + "'");
      }
      if (used != token.size()) throw FormatError("bad matrix entry '" + token + "'");
      values(i, j) = v;
    }
  }
  std::string extra;
  if (in >> extra) throw FormatError("trailing data after matrix entries");
  return DenseMatrix(std::move(values));
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n_vertices() << ' ' << g.n_edges() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

Graph read_graph(std::istream& in) {
  Index nv = -1;
  Index ne = -1;
  if (!(in >> nv >> ne) || nv < 0 || ne < 0) throw FormatError("graph header must be 'n_vertices n_edges'");
  std::vector<Graph::Edge> edges;
  edges.reserve(static_cast<std::size_t>(ne));
  for (Index e = 0; e < ne; ++e) {
    Index i = 0;
    Index j = 0;
    if (!(in >> i >> j)) throw FormatError("graph text ended early at edge " + std::to_string(e));
    edges.emplace_back(i, j);
  }
  return Graph(nv, std::move(edges));
}

void save_graph(const std::filesystem::path& path, const Graph& g) {
  auto out = open_out(path);
  write_graph(out, g);
}

Graph load_graph(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_graph(in);
}

json to_json(const Partition& part) {
  return json{{"n", part.n()}, {"outliers", part.outliers()}};
}

Partition partition_from_json(const json& j) {
  try {
    return Partition::from_outliers(j.at("n").get<Index>(), j.at("outliers").get<std::vector<Index>>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad partition JSON: ") + e.what());
  }
}

json to_json(const IterSvdOutcome& o) {
  return json{{"status", to_string(o.status)},
              {"xi", o.xi},
              {"outliers", o.part.outliers()},
              {"n", o.part.n()},
              {"basis_dim", o.space.dim()},
              {"rounds", o.rounds},
              {"svd_rounds", o.svd_rounds},
              {"mu_trace", o.mu_trace},
              {"round_bound", o.round_bound},
              {"count_bounds_hold", o.count_bounds_hold}};
}

json to_json(const IterSvdSweep& s) {
  json j = to_json(s.best);
  j["ladder_size"] = s.ladder.values.size();
  j["zero_detected"] = s.ladder.includes_zero;
  j["failed_guesses"] = s.failed_guesses;
  return j;
}

json to_json(const SelectResult& r) {
  json rounds = json::array();
  for (const auto& rec : r.rounds) {
    rounds.push_back(json{{"round", rec.round},
                          {"active", rec.active},
                          {"sample_size", rec.sample_size},
                          {"marked", rec.marked},
                          {"error", rec.error}});
  }
  return json{{"status", to_string(r.status)},
              {"n", r.n},
              {"outliers", r.outliers},
              {"chosen_columns", r.chosen_columns},
              {"covered", r.covered},
              {"depth", r.depth},
              {"final_n0", r.final_n0},
              {"rounds", std::move(rounds)}};
}

json to_json(const LpSweep& s) {
  json j = to_json(s.best);
  j["theta"] = s.theta;
  j["ladder_size"] = s.ladder.values.size();
  j["failed_guesses"] = s.failed_guesses;
  return j;
}

json to_json(const OracleResult& r) {
  json j = to_json(r.part);
  j["opt"] = r.opt.value();
  j["evaluated"] = r.evaluated;
  return j;
}

json truth_to_json(const PlantedInstance& inst) {
  json j = to_json(inst.truth);
  j["k"] = inst.k;
  j["noise_sigma"] = inst.noise_sigma;
  j["opt_hint"] = inst.opt_hint.value();
  j["pad_columns"] = inst.pad_columns;
  j["pad_row"] = inst.pad_row;
  json basis = json::array();
  for (Index c = 0; c < inst.planted_space.dim(); ++c) {
    const Eigen::VectorXd v = inst.planted_space.basis().col(c);
    basis.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  }
  j["planted_basis"] = std::move(basis);
  return j;
}

void save_instance(const std::filesystem::path& path, const PlantedInstance& inst) {
  save_matrix(path, inst.a);
  auto out = open_out(path.string() + ".truth.json");
  out << truth_to_json(inst).dump(2) << '\n';
}

}  // namespace robpca
