#pragma once

#include <memory>
#include <optional>

#include "psg/fem/function_space.hpp"
#include "psg/fem/grid_function.hpp"
#include "psg/random/truncated_normal.hpp"

namespace psg::heat {

using fem::ElementField;
using fem::GridFunction;

/// Pointwise bounds u_a <= u <= u_b.
struct BoxConstraint {
  GridFunction lower;
  GridFunction upper;

  static BoxConstraint constant(const fem::Mesh& mesh, double lo, double hi);
  void validate() const;
  bool contains(const GridFunction& u, double slack = 0.0) const;
};

/// Optimal control of -div(a grad y) = u (+ e_D), y = 0 on the boundary,
/// minimizing E[1/2 ||y - y_D||^2] + lambda/2 ||u||^2 over the box.
struct HeatModelConfig {
  std::shared_ptr<const fem::FunctionSpace> space;
  double lambda = 0.0;
  GridFunction target;                        // y_D
  std::optional<GridFunction> extra_source;   // e_D, state equation only
  BoxConstraint box;
  random::TruncatedNormalSpec field;
  fem::CgOptions cg;

  void validate() const;
  const fem::Mesh& mesh() const { return space->mesh(); }
};

struct GradientSample {
  GridFunction g;         // lambda u - p
  GridFunction state;     // y
  GridFunction adjoint;   // p
  random::SampleDraw draw;
  double objective = 0.0; // J(u, omega)
};

/// Spatially constant conductivity field for a scalar draw.
ElementField conductivity(const HeatModelConfig& config, double value);

/// Discrete state: K(a) y = M (u + e_D) with y = 0 on the boundary.
GridFunction solve_state(const HeatModelConfig& config, const GridFunction& u, const ElementField& a);

/// Discrete adjoint: K(a) p = M (y_D - y) with p = 0 on the boundary.
GridFunction solve_adjoint(const HeatModelConfig& config, const GridFunction& y, const ElementField& a);

/// 1/2 ||y - y_D||^2 + lambda/2 ||u||^2.
double objective_from_state(const HeatModelConfig& config, const GridFunction& u, const GridFunction& y);

/// J(u, omega) for a fixed conductivity.
double sample_objective(const HeatModelConfig& config, const GridFunction& u, const ElementField& a);

/// State solve, adjoint solve and G = lambda u - p, all with the same field.
GradientSample stochastic_gradient(const HeatModelConfig& config, const GridFunction& u,
                                   const ElementField& a);
GradientSample stochastic_gradient(const HeatModelConfig& config, const GridFunction& u,
                                   const random::SampleDraw& draw);

/// Nodewise clamp onto the box.
GridFunction project_box(const GridFunction& u, const BoxConstraint& box);

}  // namespace psg::heat
