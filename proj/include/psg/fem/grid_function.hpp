#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "psg/fem/mesh.hpp"

namespace psg::fem {

/// Nodal values of a continuous piecewise-linear function on a Mesh.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const Mesh& mesh, Eigen::VectorXd values)
      : mesh_id_(mesh.id()), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != mesh.num_nodes()) {
      throw std::invalid_argument("grid function: value count does not match mesh node count");
    }
  }

  static GridFunction zeros(const Mesh& mesh) {
    return GridFunction(mesh, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes())));
  }

  /// Nodal interpolant of f(x, y).
  template <typename F>
  static GridFunction interpolate(const Mesh& mesh, F&& f) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(mesh.num_nodes()));
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      const Point& p = mesh.node(i);
      v[static_cast<Eigen::Index>(i)] = f(p.x, p.y);
    }
    return GridFunction(mesh, std::move(v));
  }

  std::uint64_t mesh_id() const { return mesh_id_; }
  Eigen::Index size() const { return values_.size(); }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  double operator[](Eigen::Index i) const { return values_[i]; }

  /// Same mesh, new values.
  GridFunction with_values(Eigen::VectorXd values) const {
    if (values.size() != values_.size()) {
      throw std::invalid_argument("grid function: value count mismatch");
    }
    GridFunction out;
    out.mesh_id_ = mesh_id_;
    out.values_ = std::move(values);
    return out;
  }

  bool same_mesh(const GridFunction& other) const { return mesh_id_ == other.mesh_id_; }

 private:
  std::uint64_t mesh_id_ = 0;
  Eigen::VectorXd values_;
};

inline void require_same_mesh(const GridFunction& a, const GridFunction& b) {
  if (!a.same_mesh(b)) {
    throw std::invalid_argument("grid functions live on different meshes");
  }
}

/// One conductivity value per triangle.
class ElementField {
 public:
  ElementField() = default;
  ElementField(const Mesh& mesh, Eigen::VectorXd values)
      : mesh_id_(mesh.id()), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != mesh.num_triangles()) {
      throw std::invalid_argument("element field: value count does not match triangle count");
    }
  }

  static ElementField constant(const Mesh& mesh, double value) {
    return ElementField(
        mesh, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(mesh.num_triangles()), value));
  }

  std::uint64_t mesh_id() const { return mesh_id_; }
  Eigen::Index size() const { return values_.size(); }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](Eigen::Index t) const { return values_[t]; }

  double min() const { return values_.minCoeff(); }
  double max() const { return values_.maxCoeff(); }

  /// True when every value lies strictly inside (lower, upper).
  bool within(double lower, double upper) const {
    return values_.size() > 0 && min() > lower && max() < upper;
  }

 private:
  std::uint64_t mesh_id_ = 0;
  Eigen::VectorXd values_;
};

}  // namespace psg::fem
