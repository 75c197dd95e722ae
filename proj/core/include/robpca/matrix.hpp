#pragma once

//
// Dense real linear algebra used by every solver: SVD, best rank-k spaces,
// orthogonal projection, numerical rank and column masses.
//
// All "error" and "mass" quantities in this library are squared Frobenius
// quantities.
//

#include <Eigen/Dense>

#include <compare>
#include <span>
#include <vector>

namespace robpca {

using Index = Eigen::Index;

inline constexpr double kDefaultRankTol = 1e-9;

// d x n real matrix, column-major, finite entries, immutable after
// construction. Zero-sized shapes are allowed (e.g. an empty column
// selection).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols);
  explicit DenseMatrix(Eigen::MatrixXd values);

  static DenseMatrix identity(Index n);
  static DenseMatrix diagonal(std::span<const double> diag);
  // Row-major nested initializer, convenient for small literals.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  double operator()(Index i, Index j) const { return values_(i, j); }
  Eigen::MatrixXd::ConstColXpr col(Index j) const { return values_.col(j); }
  const Eigen::MatrixXd& values() const { return values_; }

  DenseMatrix select_columns(std::span<const Index> columns) const;
  double squared_norm() const { return values_.squaredNorm(); }

  bool operator==(const DenseMatrix& other) const {
    return rows() == other.rows() && cols() == other.cols() && values_ == other.values_;
  }

 private:
  Eigen::MatrixXd values_;
};

// Nonnegative squared Frobenius mass.
class SquaredError {
 public:
  constexpr SquaredError() = default;
  explicit SquaredError(double value);

  double value() const { return value_; }
  auto operator<=>(const SquaredError&) const = default;

 private:
  double value_ = 0.0;
};

// Orthonormal basis (d x r, r <= d) of a subspace of R^d. The empty
// subspace has r = 0.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(Index ambient_dim);

  // Takes ownership of a basis that must already be orthonormal within 1e-10.
  static Subspace from_orthonormal(Eigen::MatrixXd basis);
  // Orthonormal basis for span(columns of vectors); directions with singular
  // value <= rel_tol * sigma_max are dropped.
  static Subspace span_of(const Eigen::MatrixXd& vectors, double rel_tol = kDefaultRankTol);

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  // Orthogonal projector onto the subspace (d x d).
  Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

 private:
  Eigen::MatrixXd basis_;
};

struct SvdResult {
  Eigen::VectorXd singular_values;  // descending, length min(d, n)
  Eigen::MatrixXd left_vectors;     // d x min(d, n)
  Eigen::MatrixXd right_vectors;    // n x min(d, n)
};

SvdResult svd(const DenseMatrix& m);

struct RankKApproximation {
  Subspace space;
  SquaredError error;
};

// Span of the top-k left singular vectors and err_k(M) = sum_{i>k} sigma_i^2.
// Throws ParameterError if k > min(d, n).
RankKApproximation best_rank_k(const DenseMatrix& m, Index k);

// Pi_W^perp M. Throws ParameterError when W lives in a different ambient space.
DenseMatrix project_residual(const DenseMatrix& m, const Subspace& w);

std::vector<double> column_sq_norms(const DenseMatrix& m);

// Squared norms of the columns of Pi_W^perp M without materialising it.
std::vector<double> residual_sq_norms(const DenseMatrix& m, const Subspace& w);

// Number of singular values strictly above rel_tol * sigma_max.
Index numerical_rank(const DenseMatrix& m, double rel_tol = kDefaultRankTol);

}  // namespace robpca
