#pragma once

#include <memory>
#include <optional>

#include "psg/core/oracle.hpp"
#include "psg/heat/expected_objective.hpp"
#include "psg/heat/heat_model.hpp"

namespace psg::heat {

/// Stochastic gradient of the heat model: xi_n is the conductivity drawn
/// from (master_seed, n).
class HeatOracle : public GradientOracle {
 public:
  explicit HeatOracle(std::shared_ptr<const HeatModelConfig> config);
  OracleSample sample(const Vector& u, SampleIndex index) const override;

 private:
  std::shared_ptr<const HeatModelConfig> config_;
};

/// m-sample estimate of j(u) and the paired gap j(u) - j(u_ref) on common
/// draws omega_{n,1..m}, which never overlap the optimizer's draws.
///
/// For constant conductivity y(a) = y_1 / a, so one unit solve per call
/// serves all m samples; the gap is formed from differences to avoid
/// cancellation against ||y_D||^2.
class HeatObjectiveMonitor : public ObjectiveMonitor {
 public:
  HeatObjectiveMonitor(std::shared_ptr<const HeatModelConfig> config, int samples,
                       std::optional<GridFunction> reference);
  ObjectiveEvaluation evaluate(const Vector& u, SampleIndex index) const override;

 private:
  std::shared_ptr<const HeatModelConfig> config_;
  ExpectedObjective expected_;
  int samples_;
  std::optional<Vector> reference_;
  Vector reference_state_;  // y_1 at the reference
};

/// Projection and inner product adapters for run_psg on the model mesh.
Projection box_projection(std::shared_ptr<const HeatModelConfig> config);
InnerProduct mass_inner(std::shared_ptr<const HeatModelConfig> config);

}  // namespace psg::heat
