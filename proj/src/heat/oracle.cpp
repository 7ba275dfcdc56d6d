#include "psg/heat/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "psg/random/truncated_normal.hpp"

namespace psg::heat {

HeatOracle::HeatOracle(std::shared_ptr<const HeatModelConfig> config) : config_(std::move(config)) {
  if (!config_) throw std::invalid_argument("heat oracle: missing config");
  config_->validate();
}

OracleSample HeatOracle::sample(const Vector& u, SampleIndex index) const {
  if (index.n < 1) throw std::invalid_argument("heat oracle: iteration index must be >= 1");
  const auto counter = static_cast<std::uint64_t>(index.n);
  const random::SampleDraw d = random::draw(config_->field, index.master_seed, counter);
  const GradientSample s =
      stochastic_gradient(*config_, GridFunction(config_->mesh(), u), d);
  return OracleSample{s.g.values(), s.objective, d.value, counter};
}

HeatObjectiveMonitor::HeatObjectiveMonitor(std::shared_ptr<const HeatModelConfig> config,
                                           int samples, std::optional<GridFunction> reference)
    : config_(config), expected_(config), samples_(samples) {
  if (samples_ < 1) throw std::invalid_argument("objective monitor: need at least one sample");
  if (reference) {
    reference_ = reference->values();
    reference_state_ = expected_.unit_state(*reference);
  }
}

ObjectiveEvaluation HeatObjectiveMonitor::evaluate(const Vector& u, SampleIndex index) const {
  const auto& space = *config_->space;
  const GridFunction uf(config_->mesh(), u);
  const Vector y1 = expected_.unit_state(uf);
  const Vector& yd = config_->target.values();
  const double lambda = config_->lambda;

  const double A = space.l2_inner(y1, y1);
  const double B = space.l2_inner(y1, yd);
  const double C = space.l2_inner(yd, yd);
  const double U = space.l2_inner(u, u);

  double dA = 0.0, dB = 0.0, dU = 0.0;
  if (reference_) {
    const Vector dy = y1 - reference_state_;
    dA = space.l2_inner(dy, y1 + reference_state_);
    dB = space.l2_inner(dy, yd);
    dU = space.l2_inner(u - *reference_, u + *reference_);
  }

  const auto n = static_cast<std::uint64_t>(index.n);
  double sum = 0.0;
  double gap_sum = 0.0;
  for (int k = 1; k <= samples_; ++k) {
    const double a =
        random::draw(config_->field, index.master_seed, random::evaluation_counter(n, k)).value;
    const double inv = 1.0 / a;
    sum += 0.5 * (A * inv * inv - 2.0 * B * inv + C) + 0.5 * lambda * U;
    gap_sum += 0.5 * (dA * inv * inv - 2.0 * dB * inv) + 0.5 * lambda * dU;
  }
  ObjectiveEvaluation out;
  out.estimate = sum / samples_;
  out.gap = reference_ ? gap_sum / samples_ : std::numeric_limits<double>::quiet_NaN();
  return out;
}

Projection box_projection(std::shared_ptr<const HeatModelConfig> config) {
  return [config](const Vector& v) {
    return Vector(v.cwiseMax(config->box.lower.values()).cwiseMin(config->box.upper.values()));
  };
}

InnerProduct mass_inner(std::shared_ptr<const HeatModelConfig> config) {
  return [config](const Vector& a, const Vector& b) { return config->space->l2_inner(a, b); };
}

}  // namespace psg::heat
