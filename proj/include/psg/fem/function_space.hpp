#pragma once

#include <functional>
#include <memory>

#include "psg/fem/assembly.hpp"
#include "psg/fem/conjugate_gradient.hpp"
#include "psg/fem/grid_function.hpp"
#include "psg/fem/mesh.hpp"
#include "psg/fem/sparse_operator.hpp"

namespace psg::fem {

/// P1 space on a Mesh together with the operators every consumer needs:
/// the mass matrix (L2 geometry) and the unit-coefficient stiffness
/// (H1 seminorm). Immutable and safe to share across threads.
class FunctionSpace {
 public:
  explicit FunctionSpace(Mesh mesh);
  static std::shared_ptr<const FunctionSpace> create(int n_div);

  const Mesh& mesh() const { return mesh_; }
  const SparseOperator& mass() const { return mass_; }
  const SparseOperator& unit_stiffness() const { return unit_stiffness_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(mesh_.num_nodes()); }

  GridFunction zeros() const { return GridFunction::zeros(mesh_); }
  template <typename F>
  GridFunction interpolate(F&& f) const {
    return GridFunction::interpolate(mesh_, std::forward<F>(f));
  }

  /// Consistent load vector M f.
  Eigen::VectorXd load(const GridFunction& f) const;

  double l2_inner(const GridFunction& f, const GridFunction& g) const;
  double l2_norm(const GridFunction& f) const;
  double h1_seminorm(const GridFunction& f) const;

  /// Raw-vector versions for callers that hold nodal vectors.
  double l2_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;
  double l2_norm(const Eigen::VectorXd& f) const;

  /// ||f_h - exact||_{L2} with a degree-5 quadrature on every triangle.
  double l2_error(const GridFunction& f, const std::function<double(double, double)>& exact) const;

  /// w = K^{-1} M f with zero boundary values, K the unit-coefficient stiffness.
  GridFunction solve_unit(const GridFunction& f, const CgOptions& options = {}) const;

  void check(const GridFunction& f) const;

 private:
  Mesh mesh_;
  SparseOperator mass_;
  SparseOperator unit_stiffness_;
};

}  // namespace psg::fem
