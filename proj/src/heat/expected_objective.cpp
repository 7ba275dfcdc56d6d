#include "psg/heat/expected_objective.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "psg/fem/conjugate_gradient.hpp"

namespace psg::heat {

ExpectedObjective::ExpectedObjective(std::shared_ptr<const HeatModelConfig> config)
    : config_(std::move(config)) {
  if (!config_) throw std::invalid_argument("expected objective: missing config");
  config_->validate();
  m1_ = config_->field.inverse_moment(1);
  m2_ = config_->field.inverse_moment(2);
  target_solve_ = unit_solve(config_->target.values(), nullptr);
}

Eigen::VectorXd ExpectedObjective::unit_solve(const Eigen::VectorXd& f, Eigen::VectorXd* warm) const {
  const auto& space = *config_->space;
  const Eigen::VectorXd b = space.mass().apply(f);
  Eigen::VectorXd x = warm ? *warm : Eigen::VectorXd::Zero(f.size());
  fem::conjugate_gradient(space.unit_stiffness(), b, space.mesh().boundary_mask(), x, config_->cg);
  if (warm) *warm = x;
  return x;
}

Eigen::VectorXd ExpectedObjective::unit_state(const GridFunction& u, Eigen::VectorXd* warm) const {
  config_->space->check(u);
  Eigen::VectorXd source = u.values();
  if (config_->extra_source) source += config_->extra_source->values();
  return unit_solve(source, warm);
}

double ExpectedObjective::value(const GridFunction& u) const {
  const auto& space = *config_->space;
  const Eigen::VectorXd y1 = unit_state(u);
  const Eigen::VectorXd& yd = config_->target.values();
  return 0.5 * space.l2_inner(yd, yd) - m1_ * space.l2_inner(y1, yd) +
         0.5 * m2_ * space.l2_inner(y1, y1) + 0.5 * config_->lambda * space.l2_inner(u.values(), u.values());
}

GridFunction ExpectedObjective::gradient(const GridFunction& u) const {
  const Eigen::VectorXd y1 = unit_state(u);
  const Eigen::VectorXd py1 = unit_solve(y1, nullptr);
  return u.with_values(config_->lambda * u.values() - m1_ * target_solve_ + m2_ * py1);
}

double ExpectedObjective::lipschitz_bound() const {
  const double mu1 = 2 * std::numbers::pi * std::numbers::pi;
  return config_->lambda + m2_ / (mu1 * mu1);
}

GridFunction minimize_expected(const ExpectedObjective& objective, const GridFunction& start,
                               int max_iterations, double tolerance) {
  const auto& config = objective.config();
  const auto& space = *config.space;
  const double step = 1.0 / objective.lipschitz_bound();

  Eigen::VectorXd warm_state = Eigen::VectorXd::Zero(space.dimension());
  Eigen::VectorXd warm_adjoint = Eigen::VectorXd::Zero(space.dimension());
  auto grad = [&](const GridFunction& v) {
    const Eigen::VectorXd y1 = objective.unit_state(v, &warm_state);
    const Eigen::VectorXd py1 = objective.unit_solve(y1, &warm_adjoint);
    return Eigen::VectorXd(config.lambda * v.values() - objective.m1_ * objective.target_solve_ +
                           objective.m2_ * py1);
  };

  GridFunction x = project_box(start, config.box);
  GridFunction z = x;
  double t = 1.0;
  for (int k = 0; k < max_iterations; ++k) {
    const Eigen::VectorXd g = grad(z);
    GridFunction next = project_box(z.with_values(z.values() - step * g), config.box);
    const Eigen::VectorXd dx = next.values() - x.values();
    // Restart the momentum when it points uphill.
    if ((z.values() - next.values()).dot(space.mass().apply(dx)) > 0.0) t = 1.0;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = next.with_values(next.values() + ((t - 1.0) / t_next) * dx);
    t = t_next;
    x = std::move(next);
    if (space.l2_norm(dx) < tolerance) break;
  }
  return x;
}

}  // namespace psg::heat
