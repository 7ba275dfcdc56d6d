#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "psg/fem/grid_function.hpp"
#include "psg/fem/mesh.hpp"
#include "psg/fem/sparse_operator.hpp"

namespace psg::fem {

/// Raised when conjugate gradients hits its iteration cap.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double relative_residual)
      : std::runtime_error(what), iterations_(iterations), relative_residual_(relative_residual) {}
  int iterations() const { return iterations_; }
  double relative_residual() const { return relative_residual_; }

 private:
  int iterations_;
  double relative_residual_;
};

struct CgOptions {
  double relative_tolerance = 1e-10;
  /// 0 selects 10 * dimension.
  int max_iterations = 0;
};

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Unpreconditioned CG for K x = b restricted to the free rows (fixed[i] == 0).
/// Fixed entries of x are held at zero, which is the row/column elimination of
/// homogeneous Dirichlet conditions. Throws SolverError on non-convergence.
CgReport conjugate_gradient(const SparseOperator& K, const Eigen::VectorXd& b,
                            std::span<const std::uint8_t> fixed, Eigen::VectorXd& x,
                            const CgOptions& options = {});

/// Solves the Dirichlet-zero problem K w = load on the interior nodes.
/// `load` is the assembled right-hand side (a dual vector, one entry per node);
/// its boundary entries are ignored.
GridFunction solve_dirichlet(const SparseOperator& K, const Eigen::VectorXd& load, const Mesh& mesh,
                             const CgOptions& options = {}, CgReport* report = nullptr);

}  // namespace psg::fem
