#pragma once

#include <span>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace psg::fem {

/// Symmetric matrix in compressed-row storage.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

  SparseOperator() = default;
  explicit SparseOperator(Matrix m);

  Eigen::Index dimension() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

  std::span<const int> row_offsets() const;
  std::span<const int> column_indices() const;
  std::span<const double> entries() const;

  double coeff(Eigen::Index i, Eigen::Index j) const { return matrix_.coeff(i, j); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix_ * x; }
  double quadratic_form(const Eigen::VectorXd& x) const { return x.dot(matrix_ * x); }

  /// max |A_ij - A_ji| <= rel_tol * max |A_ij|.
  bool is_symmetric(double rel_tol = 1e-12) const;

  SparseOperator scaled(double c) const { return SparseOperator(Matrix(c * matrix_)); }

 private:
  Matrix matrix_;
};

}  // namespace psg::fem
