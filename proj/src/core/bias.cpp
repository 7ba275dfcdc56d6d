#include "psg/core/bias.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psg {

namespace {

class BiasedOracle final : public GradientOracle {
 public:
  BiasedOracle(std::shared_ptr<const GradientOracle> inner, BiasSpec spec)
      : inner_(std::move(inner)), spec_(std::move(spec)) {}

  OracleSample sample(const Vector& u, SampleIndex index) const override {
    OracleSample s = inner_->sample(u, index);
    double k = spec_.schedule.at(index.n);
    if (k == 0.0) return s;
    if (spec_.direction == BiasDirection::alternating && index.n % 2 == 0) k = -k;
    s.gradient.noalias() += k * spec_.unit_direction;
    return s;
  }

 private:
  std::shared_ptr<const GradientOracle> inner_;
  BiasSpec spec_;
};

}  // namespace

double BiasSchedule::at(std::int64_t n) const {
  if (magnitude == 0.0) return 0.0;
  return magnitude * std::pow(static_cast<double>(n), -exponent);
}

BiasCheck check_bias_summability(const BiasSchedule& schedule, const StepSizeRule& rule,
                                 std::int64_t horizon) {
  BiasCheck check;
  check.step_exponent = rule.decay_exponent();
  check.bias_exponent = schedule.exponent;
  for (std::int64_t n = 1; n <= horizon; ++n) check.horizon_sum += rule.tau(n) * schedule.at(n);
  if (schedule.magnitude == 0.0) {
    check.summable = true;
  } else {
    check.summable = schedule.exponent >= 0.0 && check.step_exponent + schedule.exponent > 1.0 &&
                     std::isfinite(check.horizon_sum);
  }
  return check;
}

std::shared_ptr<GradientOracle> wrap_with_bias(std::shared_ptr<const GradientOracle> inner,
                                               BiasSpec spec, const StepSizeRule& rule,
                                               const InnerProduct& inner_product,
                                               std::int64_t horizon) {
  if (!inner) throw std::invalid_argument("bias: null oracle");
  if (!(spec.schedule.magnitude >= 0.0) || !std::isfinite(spec.schedule.magnitude)) {
    throw std::invalid_argument("bias: magnitude must be finite and nonnegative");
  }
  if (spec.schedule.magnitude > 0.0 && spec.schedule.exponent < 0.0) {
    throw std::invalid_argument("bias: growing schedule violates sup K_n < inf");
  }
  const BiasCheck check = check_bias_summability(spec.schedule, rule, horizon);
  if (!check.summable) {
    std::ostringstream msg;
    msg << "bias: sum tau_n K_n diverges for step rule " << rule.name() << " (tau ~ n^-"
        << check.step_exponent << ", K ~ n^-" << check.bias_exponent << ")";
    throw std::invalid_argument(msg.str());
  }
  if (spec.schedule.magnitude > 0.0) {
    const double norm = std::sqrt(inner_product(spec.unit_direction, spec.unit_direction));
    if (!(norm > 0.0)) throw std::invalid_argument("bias: direction must be nonzero");
    spec.unit_direction /= norm;
  }
  return std::make_shared<BiasedOracle>(std::move(inner), std::move(spec));
}

}  // namespace psg
