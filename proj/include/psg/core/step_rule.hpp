#pragma once

#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

namespace psg {

/// tau_n = tau.
struct ConstantStep {
  double tau;
};
/// tau_n = theta / (n + nu).
struct PolyDecayStep {
  double theta;
  double nu = 0.0;
};
/// tau_n = theta * diameter / (sqrt_m * sqrt(n)).
struct SqrtDecayStep {
  double theta;
  double diameter;
  double sqrt_m;
};
/// tau_n = diameter / (sqrt_m * sqrt(horizon)) for n = 1..horizon.
struct FixedHorizonStep {
  double diameter;
  double sqrt_m;
  std::int64_t horizon;
};
/// tau_n = theta / n^gamma, gamma in (1/2, 1).
struct PowerDecayStep {
  double theta;
  double gamma;
};

/// Exogenous step-size policy. Parameters are validated on construction.
class StepSizeRule {
 public:
  using Variant =
      std::variant<ConstantStep, PolyDecayStep, SqrtDecayStep, FixedHorizonStep, PowerDecayStep>;

  StepSizeRule(Variant rule);  // NOLINT: implicit from any alternative

  template <typename Rule>
    requires std::is_constructible_v<Variant, Rule> && (!std::is_same_v<std::decay_t<Rule>, Variant>)
  StepSizeRule(Rule rule) : StepSizeRule(Variant(std::move(rule))) {}  // NOLINT

  double tau(std::int64_t n) const;

  /// True when sum tau_n = inf and sum tau_n^2 < inf.
  bool robbins_monro_satisfied() const;

  /// p such that tau_n ~ n^-p as n -> inf (0 for the constant policies).
  double decay_exponent() const;

  std::string name() const;
  const Variant& variant() const { return rule_; }

 private:
  Variant rule_;
};

}  // namespace psg
