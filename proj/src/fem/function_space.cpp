#include "psg/fem/function_space.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace psg::fem {

namespace {

// Dunavant degree-5 rule: barycentric points and weights (sum to 1).
struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};

constexpr double kA1 = 0.059715871789770, kB1 = 0.470142064105115, kW1 = 0.132394152788506;
constexpr double kA2 = 0.797426985353087, kB2 = 0.101286507323456, kW2 = 0.125939180544827;

constexpr std::array<QuadPoint, 7> kRule{{
    {{1.0 / 3, 1.0 / 3, 1.0 / 3}, 0.225},
    {{kA1, kB1, kB1}, kW1},
    {{kB1, kA1, kB1}, kW1},
    {{kB1, kB1, kA1}, kW1},
    {{kA2, kB2, kB2}, kW2},
    {{kB2, kA2, kB2}, kW2},
    {{kB2, kB2, kA2}, kW2},
}};

}  // namespace

FunctionSpace::FunctionSpace(Mesh mesh)
    : mesh_(std::move(mesh)),
      mass_(assemble_mass(mesh_)),
      unit_stiffness_(assemble_stiffness(mesh_, ElementField::constant(mesh_, 1.0))) {}

std::shared_ptr<const FunctionSpace> FunctionSpace::create(int n_div) {
  return std::make_shared<const FunctionSpace>(Mesh(n_div));
}

void FunctionSpace::check(const GridFunction& f) const {
  if (f.mesh_id() != mesh_.id()) {
    throw std::invalid_argument("grid function does not belong to this function space");
  }
}

Eigen::VectorXd FunctionSpace::load(const GridFunction& f) const {
  check(f);
  return mass_.apply(f.values());
}

double FunctionSpace::l2_inner(const GridFunction& f, const GridFunction& g) const {
  check(f);
  check(g);
  return l2_inner(f.values(), g.values());
}

double FunctionSpace::l2_norm(const GridFunction& f) const {
  check(f);
  return l2_norm(f.values());
}

double FunctionSpace::h1_seminorm(const GridFunction& f) const {
  check(f);
  return std::sqrt(std::max(0.0, unit_stiffness_.quadratic_form(f.values())));
}

double FunctionSpace::l2_inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
  if (f.size() != dimension() || g.size() != dimension()) {
    throw std::invalid_argument("l2_inner: dimension mismatch");
  }
  return f.dot(mass_.matrix() * g);
}

double FunctionSpace::l2_norm(const Eigen::VectorXd& f) const {
  return std::sqrt(std::max(0.0, l2_inner(f, f)));
}

double FunctionSpace::l2_error(const GridFunction& f,
                               const std::function<double(double, double)>& exact) const {
  check(f);
  double sum = 0.0;
  const auto tris = mesh_.triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    const double area = mesh_.signed_area(t);
    for (const auto& q : kRule) {
      double x = 0.0, y = 0.0, fh = 0.0;
      for (int k = 0; k < 3; ++k) {
        const Point& p = mesh_.node(tri[k]);
        x += q.bary[k] * p.x;
        y += q.bary[k] * p.y;
        fh += q.bary[k] * f[tri[k]];
      }
      const double d = fh - exact(x, y);
      sum += q.weight * area * d * d;
    }
  }
  return std::sqrt(sum);
}

GridFunction FunctionSpace::solve_unit(const GridFunction& f, const CgOptions& options) const {
  return solve_dirichlet(unit_stiffness_, load(f), mesh_, options);
}

}  // namespace psg::fem
