#include "robpca/matrix.hpp"

#include "robpca/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace robpca {

namespace {

void require_finite(const Eigen::MatrixXd& values) {
  if (!values.allFinite()) {
    throw NonFiniteError("matrix contains NaN or Inf entries");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(Index rows, Index cols) {
  if (rows < 0 || cols < 0) throw ParameterError("negative matrix dimension");
  values_ = Eigen::MatrixXd::Zero(rows, cols);
}

DenseMatrix::DenseMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  require_finite(values_);
}

DenseMatrix DenseMatrix::identity(Index n) {
  return DenseMatrix(Eigen::MatrixXd::Identity(n, n));
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  const auto n = static_cast<Index>(diag.size());
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) values(i, i) = diag[static_cast<std::size_t>(i)];
  return DenseMatrix(std::move(values));
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto d = static_cast<Index>(rows.size());
  const Index n = d == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  Eigen::MatrixXd values(d, n);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n) throw ParameterError("ragged row list");
    Index j = 0;
    for (double v : row) values(i, j++) = v;
    ++i;
  }
  return DenseMatrix(std::move(values));
}

DenseMatrix DenseMatrix::select_columns(std::span<const Index> columns) const {
  Eigen::MatrixXd out(rows(), static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Index j = columns[c];
    if (j < 0 || j >= cols()) {
      throw ParameterError("column index " + std::to_string(j) + " out of range");
    }
    out.col(static_cast<Index>(c)) = values_.col(j);
  }
  DenseMatrix result;
  result.values_ = std::move(out);
  return result;
}

SquaredError::SquaredError(double value) : value_(value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw ParameterError("squared error must be finite and nonnegative");
  }
}

Subspace::Subspace(Index ambient_dim) : basis_(ambient_dim, 0) {
  if (ambient_dim < 0) throw ParameterError("negative ambient dimension");
}

Subspace Subspace::from_orthonormal(Eigen::MatrixXd basis) {
  require_finite(basis);
  if (basis.cols() > basis.rows()) {
    throw ParameterError("subspace basis longer than ambient dimension");
  }
  if (basis.cols() > 0) {
    const Eigen::MatrixXd gram = basis.transpose() * basis;
    const double dev = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-10) throw ParameterError("subspace basis is not orthonormal");
  }
  Subspace s;
  s.basis_ = std::move(basis);
  return s;
}

Subspace Subspace::span_of(const Eigen::MatrixXd& vectors, double rel_tol) {
  const Index d = vectors.rows();
  if (vectors.cols() == 0 || d == 0) return Subspace(d);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vectors);
  qr.setThreshold(rel_tol);
  const Index r = qr.rank();
  Subspace s(d);
  if (r == 0) return s;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(d, r);
  q.applyOnTheLeft(qr.householderQ());
  s.basis_ = std::move(q);
  return s;
}

SvdResult svd(const DenseMatrix& m) {
  const Index r = std::min(m.rows(), m.cols());
  SvdResult out;
  if (r == 0) {
    out.singular_values.resize(0);
    out.left_vectors.resize(m.rows(), 0);
    out.right_vectors.resize(m.cols(), 0);
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> solver(m.values(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.singular_values = solver.singularValues();
  out.left_vectors = solver.matrixU();
  out.right_vectors = solver.matrixV();
  return out;
}

RankKApproximation best_rank_k(const DenseMatrix& m, Index k) {
  const Index r = std::min(m.rows(), m.cols());
  if (k < 0 || k > r) {
    throw ParameterError("best_rank_k: k=" + std::to_string(k) + " exceeds min(d, n)=" +
                         std::to_string(r));
  }
  if (r == 0) return {Subspace(m.rows()), SquaredError(0.0)};
  const SvdResult s = svd(m);
  double tail = 0.0;
  for (Index i = r - 1; i >= k; --i) tail += s.singular_values(i) * s.singular_values(i);
  return {Subspace::from_orthonormal(s.left_vectors.leftCols(k)), SquaredError(tail)};
}

namespace {

Eigen::MatrixXd residual_of(const Eigen::MatrixXd& m, const Subspace& w) {
  if (w.ambient_dim() != m.rows()) {
    throw ParameterError("subspace ambient dimension " + std::to_string(w.ambient_dim()) +
                         " does not match matrix rows " + std::to_string(m.rows()));
  }
  if (w.dim() == 0) return m;
  const Eigen::MatrixXd& q = w.basis();
  return m - q * (q.transpose() * m);
}

}  // namespace

DenseMatrix project_residual(const DenseMatrix& m, const Subspace& w) {
  return DenseMatrix(residual_of(m.values(), w));
}

std::vector<double> column_sq_norms(const DenseMatrix& m) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = m.col(j).squaredNorm();
  return out;
}

std::vector<double> residual_sq_norms(const DenseMatrix& m, const Subspace& w) {
  const Eigen::MatrixXd r = residual_of(m.values(), w);
  std::vector<double> out(static_cast<std::size_t>(r.cols()));
  for (Index j = 0; j < r.cols(); ++j) out[static_cast<std::size_t>(j)] = r.col(j).squaredNorm();
  return out;
}

Index numerical_rank(const DenseMatrix& m, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ParameterError("rel_tol must lie in (0, 1)");
  if (std::min(m.rows(), m.cols()) == 0) return 0;
  const Eigen::VectorXd sv = svd(m).singular_values;
  const double smax = sv(0);
  if (smax == 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * smax) ++rank;
  }
  return rank;
}

}  // namespace robpca
