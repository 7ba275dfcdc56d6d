#include "psg/fem/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace psg::fem {

SparseOperator::SparseOperator(Matrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("sparse operator must be square");
  }
  matrix_.makeCompressed();
}

std::span<const int> SparseOperator::row_offsets() const {
  return {matrix_.outerIndexPtr(), static_cast<std::size_t>(matrix_.rows() + 1)};
}

std::span<const int> SparseOperator::column_indices() const {
  return {matrix_.innerIndexPtr(), static_cast<std::size_t>(matrix_.nonZeros())};
}

std::span<const double> SparseOperator::entries() const {
  return {matrix_.valuePtr(), static_cast<std::size_t>(matrix_.nonZeros())};
}

bool SparseOperator::is_symmetric(double rel_tol) const {
  double scale = 0.0;
  for (double v : entries()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return true;
  const Matrix transposed = matrix_.transpose();
  const Matrix diff = matrix_ - transposed;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (Matrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst <= rel_tol * scale;
}

}  // namespace psg::fem
