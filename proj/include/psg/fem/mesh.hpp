#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace psg::fem {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Triangle = std::array<int, 3>;

/// Uniform triangulation of the unit square [0,1]^2.
///
/// Node (i, j) sits at (i / n_div, j / n_div) and has index i + j * (n_div + 1).
/// Every cell is split along its bottom-left to top-right diagonal, so the
/// unit-coefficient stiffness reproduces the classical 5-point stencil.
/// Triangles are stored counter-clockwise.
class Mesh {
 public:
  /// Throws std::invalid_argument for n_div < 1.
  explicit Mesh(int n_div);

  int n_div() const { return n_div_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }

  std::span<const Point> nodes() const { return nodes_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  const Point& node(std::size_t i) const { return nodes_[i]; }

  bool is_boundary(std::size_t node) const { return boundary_[node] != 0; }
  std::span<const std::uint8_t> boundary_mask() const { return boundary_; }
  std::size_t num_boundary_nodes() const { return num_boundary_; }

  /// Signed area of triangle t (positive for every triangle of this mesh).
  double signed_area(std::size_t t) const;

  /// Length of the shortest edge.
  double h_min() const { return h_min_; }

  /// Identity shared by all copies of this mesh; distinct for every
  /// constructed mesh. Grid functions use it to detect mixing.
  std::uint64_t id() const { return id_; }

 private:
  int n_div_;
  std::uint64_t id_;
  std::vector<Point> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint8_t> boundary_;
  std::size_t num_boundary_ = 0;
  double h_min_ = 0.0;
};

Mesh build_mesh(int n_div);

}  // namespace psg::fem
