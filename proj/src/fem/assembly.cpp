#include "psg/fem/assembly.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace psg::fem {

namespace {

using Triplet = Eigen::Triplet<double, int>;

// Gradients of the three barycentric coordinates, each scaled by 2|T|.
std::array<std::array<double, 2>, 3> scaled_gradients(const Point& a, const Point& b, const Point& c) {
  return {{{b.y - c.y, c.x - b.x}, {c.y - a.y, a.x - c.x}, {a.y - b.y, b.x - a.x}}};
}

SparseOperator from_triplets(const Mesh& mesh, const std::vector<Triplet>& triplets) {
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  SparseOperator::Matrix m(n, n);
  // setFromTriplets sums duplicates in insertion order, so the result is
  // reproducible bit for bit.
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseOperator(std::move(m));
}

}  // namespace

SparseOperator assemble_stiffness(const Mesh& mesh, const ElementField& a) {
  if (a.mesh_id() != mesh.id() || static_cast<std::size_t>(a.size()) != mesh.num_triangles()) {
    throw std::invalid_argument("assemble_stiffness: element field does not match mesh");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  const auto tris = mesh.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    const double area = mesh.signed_area(t);
    const auto g = scaled_gradients(mesh.node(tri[0]), mesh.node(tri[1]), mesh.node(tri[2]));
    const double factor = a[static_cast<Eigen::Index>(t)] / (4.0 * area);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.emplace_back(tri[i], tri[j], factor * (g[i][0] * g[j][0] + g[i][1] * g[j][1]));
      }
    }
  }
  return from_triplets(mesh, triplets);
}

SparseOperator assemble_mass(const Mesh& mesh) {
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.num_triangles());
  const auto tris = mesh.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    const double area = mesh.signed_area(t);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
      }
    }
  }
  return from_triplets(mesh, triplets);
}

}  // namespace psg::fem
