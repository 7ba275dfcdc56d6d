#include "psg/core/step_rule.hpp"

#include <cmath>
#include <stdexcept>

namespace psg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("step rule: ") + what + " must be positive");
  }
}

}  // namespace

StepSizeRule::StepSizeRule(Variant rule) : rule_(rule) {
  std::visit(overloaded{
                 [](const ConstantStep& r) { require_positive(r.tau, "tau"); },
                 [](const PolyDecayStep& r) {
                   require_positive(r.theta, "theta");
                   // nu may be zero; it only has to keep n + nu positive for n >= 1.
                   if (!(r.nu > -1.0) || !std::isfinite(r.nu)) {
                     throw std::invalid_argument("step rule: nu must exceed -1");
                   }
                 },
                 [](const SqrtDecayStep& r) {
                   require_positive(r.theta, "theta");
                   require_positive(r.diameter, "diameter");
                   require_positive(r.sqrt_m, "sqrt_M");
                 },
                 [](const FixedHorizonStep& r) {
                   require_positive(r.diameter, "diameter");
                   require_positive(r.sqrt_m, "sqrt_M");
                   if (r.horizon < 1) throw std::invalid_argument("step rule: horizon must be >= 1");
                 },
                 [](const PowerDecayStep& r) {
                   require_positive(r.theta, "theta");
                   if (!(r.gamma > 0.5 && r.gamma < 1.0)) {
                     throw std::invalid_argument("step rule: gamma must lie in (1/2, 1)");
                   }
                 },
             },
             rule_);
}

double StepSizeRule::tau(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("step rule: n must be >= 1");
  const double x = static_cast<double>(n);
  return std::visit(
      overloaded{
          [](const ConstantStep& r) { return r.tau; },
          [x](const PolyDecayStep& r) { return r.theta / (x + r.nu); },
          [x](const SqrtDecayStep& r) { return r.theta * r.diameter / (r.sqrt_m * std::sqrt(x)); },
          [](const FixedHorizonStep& r) {
            return r.diameter / (r.sqrt_m * std::sqrt(static_cast<double>(r.horizon)));
          },
          [x](const PowerDecayStep& r) { return r.theta / std::pow(x, r.gamma); },
      },
      rule_);
}

bool StepSizeRule::robbins_monro_satisfied() const {
  return std::holds_alternative<PolyDecayStep>(rule_) || std::holds_alternative<PowerDecayStep>(rule_);
}

double StepSizeRule::decay_exponent() const {
  return std::visit(overloaded{
                        [](const ConstantStep&) { return 0.0; },
                        [](const PolyDecayStep&) { return 1.0; },
                        [](const SqrtDecayStep&) { return 0.5; },
                        [](const FixedHorizonStep&) { return 0.0; },
                        [](const PowerDecayStep& r) { return r.gamma; },
                    },
                    rule_);
}

std::string StepSizeRule::name() const {
  return std::visit(overloaded{
                        [](const ConstantStep&) { return std::string("constant"); },
                        [](const PolyDecayStep&) { return std::string("poly_decay"); },
                        [](const SqrtDecayStep&) { return std::string("sqrt_decay"); },
                        [](const FixedHorizonStep&) { return std::string("fixed_horizon"); },
                        [](const PowerDecayStep&) { return std::string("power_decay"); },
                    },
                    rule_);
}

}  // namespace psg
