#include "psg/fem/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace psg::fem {

namespace {

std::uint64_t next_mesh_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

double edge_length(const Point& a, const Point& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

}  // namespace

Mesh::Mesh(int n_div) : n_div_(n_div), id_(next_mesh_id()) {
  if (n_div < 1) {
    throw std::invalid_argument("mesh: n_div must be >= 1, got " + std::to_string(n_div));
  }
  const int side = n_div + 1;
  const double h = 1.0 / n_div;
  nodes_.reserve(static_cast<std::size_t>(side) * side);
  boundary_.reserve(nodes_.capacity());
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      // i * h would leave 1 - eps at the far edge for some n_div.
      const double x = (i == n_div) ? 1.0 : i * h;
      const double y = (j == n_div) ? 1.0 : j * h;
      nodes_.push_back({x, y});
      const bool on_boundary = i == 0 || j == 0 || i == n_div || j == n_div;
      boundary_.push_back(on_boundary ? 1 : 0);
      num_boundary_ += on_boundary ? 1 : 0;
    }
  }

  triangles_.reserve(2 * static_cast<std::size_t>(n_div) * n_div);
  for (int j = 0; j < n_div; ++j) {
    for (int i = 0; i < n_div; ++i) {
      const int bl = i + j * side;
      const int br = bl + 1;
      const int tr = bl + side + 1;
      const int tl = bl + side;
      triangles_.push_back({bl, br, tr});
      triangles_.push_back({bl, tr, tl});
    }
  }

  h_min_ = std::numeric_limits<double>::infinity();
  for (const auto& t : triangles_) {
    for (int k = 0; k < 3; ++k) {
      h_min_ = std::min(h_min_, edge_length(nodes_[t[k]], nodes_[t[(k + 1) % 3]]));
    }
  }
}

double Mesh::signed_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point& a = nodes_[tri[0]];
  const Point& b = nodes_[tri[1]];
  const Point& c = nodes_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Mesh build_mesh(int n_div) { return Mesh(n_div); }

}  // namespace psg::fem
