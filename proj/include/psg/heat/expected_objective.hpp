#pragma once

#include <memory>

#include "psg/heat/heat_model.hpp"

namespace psg::heat {

/// Exact expected objective for a spatially constant conductivity.
///
/// With K(a) = a K_1 the state is y(a) = y_1 / a where y_1 = K_1^{-1} M (u + e_D),
/// so every expectation reduces to the inverse moments E[1/a] and E[1/a^2].
class ExpectedObjective {
 public:
  explicit ExpectedObjective(std::shared_ptr<const HeatModelConfig> config);

  double value(const GridFunction& u) const;
  GridFunction gradient(const GridFunction& u) const;

  /// Lipschitz bound of the gradient in the L2 geometry:
  /// lambda + E[1/a^2] / mu_1^2 with mu_1 >= 2 pi^2.
  double lipschitz_bound() const;

  double inverse_moment_1() const { return m1_; }
  double inverse_moment_2() const { return m2_; }
  const HeatModelConfig& config() const { return *config_; }

  /// y_1 = K_1^{-1} M (u + e_D); `warm` is used as CG starting point when given.
  Eigen::VectorXd unit_state(const GridFunction& u, Eigen::VectorXd* warm = nullptr) const;

 private:
  Eigen::VectorXd unit_solve(const Eigen::VectorXd& f, Eigen::VectorXd* warm) const;
  friend GridFunction minimize_expected(const ExpectedObjective&, const GridFunction&, int, double);

  std::shared_ptr<const HeatModelConfig> config_;
  double m1_;
  double m2_;
  Eigen::VectorXd target_solve_;  // K_1^{-1} M y_D
};

/// Accelerated projected gradient (FISTA with gradient restart) on the
/// expected objective over the box. Stops after `max_iterations` or when the
/// L2 step falls below `tolerance`.
GridFunction minimize_expected(const ExpectedObjective& objective, const GridFunction& start,
                               int max_iterations = 5000, double tolerance = 1e-13);

}  // namespace psg::heat
