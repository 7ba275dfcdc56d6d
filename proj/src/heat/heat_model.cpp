#include "psg/heat/heat_model.hpp"

#include <cmath>
#include <stdexcept>

#include "psg/fem/assembly.hpp"
#include "psg/fem/conjugate_gradient.hpp"

namespace psg::heat {

BoxConstraint BoxConstraint::constant(const fem::Mesh& mesh, double lo, double hi) {
  BoxConstraint box{GridFunction::interpolate(mesh, [lo](double, double) { return lo; }),
                    GridFunction::interpolate(mesh, [hi](double, double) { return hi; })};
  box.validate();
  return box;
}

void BoxConstraint::validate() const {
  fem::require_same_mesh(lower, upper);
  if ((lower.values().array() > upper.values().array()).any()) {
    throw std::invalid_argument("box: lower bound exceeds upper bound");
  }
}

bool BoxConstraint::contains(const GridFunction& u, double slack) const {
  fem::require_same_mesh(u, lower);
  return ((u.values().array() >= lower.values().array() - slack) &&
          (u.values().array() <= upper.values().array() + slack))
      .all();
}

void HeatModelConfig::validate() const {
  if (!space) throw std::invalid_argument("heat model: missing function space");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("heat model: lambda must be >= 0");
  }
  space->check(target);
  if (extra_source) space->check(*extra_source);
  space->check(box.lower);
  box.validate();
  field.validate();
}

ElementField conductivity(const HeatModelConfig& config, double value) {
  if (!(value > config.field.lower && value < config.field.upper)) {
    throw std::invalid_argument("conductivity outside (a_min, a_max)");
  }
  return ElementField::constant(config.mesh(), value);
}

namespace {

void check_field(const HeatModelConfig& config, const ElementField& a) {
  if (a.mesh_id() != config.mesh().id()) {
    throw std::invalid_argument("conductivity field does not belong to the model mesh");
  }
  if (!(a.min() > 0.0)) throw std::invalid_argument("conductivity must be strictly positive");
}

}  // namespace

GridFunction solve_state(const HeatModelConfig& config, const GridFunction& u, const ElementField& a) {
  config.space->check(u);
  check_field(config, a);
  Eigen::VectorXd source = u.values();
  if (config.extra_source) source += config.extra_source->values();
  const fem::SparseOperator K = fem::assemble_stiffness(config.mesh(), a);
  return fem::solve_dirichlet(K, config.space->mass().apply(source), config.mesh(), config.cg);
}

GridFunction solve_adjoint(const HeatModelConfig& config, const GridFunction& y, const ElementField& a) {
  config.space->check(y);
  check_field(config, a);
  const fem::SparseOperator K = fem::assemble_stiffness(config.mesh(), a);
  const Eigen::VectorXd misfit = config.target.values() - y.values();
  return fem::solve_dirichlet(K, config.space->mass().apply(misfit), config.mesh(), config.cg);
}

double objective_from_state(const HeatModelConfig& config, const GridFunction& u, const GridFunction& y) {
  const Eigen::VectorXd d = y.values() - config.target.values();
  const double tracking = 0.5 * config.space->l2_inner(d, d);
  return tracking + 0.5 * config.lambda * config.space->l2_inner(u.values(), u.values());
}

double sample_objective(const HeatModelConfig& config, const GridFunction& u, const ElementField& a) {
  return objective_from_state(config, u, solve_state(config, u, a));
}

GradientSample stochastic_gradient(const HeatModelConfig& config, const GridFunction& u,
                                   const ElementField& a) {
  config.space->check(u);
  check_field(config, a);
  const fem::SparseOperator K = fem::assemble_stiffness(config.mesh(), a);
  const auto& M = config.space->mass();

  Eigen::VectorXd source = u.values();
  if (config.extra_source) source += config.extra_source->values();
  GridFunction y = fem::solve_dirichlet(K, M.apply(source), config.mesh(), config.cg);
  const Eigen::VectorXd misfit = config.target.values() - y.values();
  GridFunction p = fem::solve_dirichlet(K, M.apply(misfit), config.mesh(), config.cg);

  GradientSample s{u.with_values(config.lambda * u.values() - p.values()), std::move(y), std::move(p),
                   {}, 0.0};
  s.objective = objective_from_state(config, u, s.state);
  return s;
}

GradientSample stochastic_gradient(const HeatModelConfig& config, const GridFunction& u,
                                   const random::SampleDraw& draw) {
  GradientSample s = stochastic_gradient(config, u, conductivity(config, draw.value));
  s.draw = draw;
  return s;
}

GridFunction project_box(const GridFunction& u, const BoxConstraint& box) {
  fem::require_same_mesh(u, box.lower);
  return u.with_values(u.values().cwiseMax(box.lower.values()).cwiseMin(box.upper.values()));
}

}  // namespace psg::heat
