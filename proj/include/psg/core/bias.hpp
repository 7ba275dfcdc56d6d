#pragma once

#include <cstdint>
#include <memory>

#include "psg/core/oracle.hpp"
#include "psg/core/step_rule.hpp"

namespace psg {

/// K_n = magnitude * n^-exponent.
struct BiasSchedule {
  double magnitude = 0.0;
  double exponent = 0.0;
  double at(std::int64_t n) const;
};

enum class BiasDirection {
  fixed,        // r_n = K_n * d
  alternating,  // r_n = (-1)^(n+1) * K_n * d
};

struct BiasSpec {
  BiasSchedule schedule;
  BiasDirection direction = BiasDirection::fixed;
  Vector unit_direction;  // normalized again under the oracle's inner product
};

struct BiasCheck {
  bool summable = false;
  double horizon_sum = 0.0;      // sum_{n <= horizon} tau_n K_n
  double step_exponent = 0.0;    // tau_n ~ n^-p
  double bias_exponent = 0.0;    // K_n ~ n^-q
};

/// sum tau_n K_n < inf and sup K_n < inf, decided by comparing the power-law
/// exponents (p + q > 1); the partial sum over the horizon is reported alongside.
BiasCheck check_bias_summability(const BiasSchedule& schedule, const StepSizeRule& rule,
                                 std::int64_t horizon);

/// Oracle emitting G(u, xi_n) + r_n with ||r_n|| = K_n. Throws
/// std::invalid_argument when the schedule is not admissible for `rule`.
std::shared_ptr<GradientOracle> wrap_with_bias(std::shared_ptr<const GradientOracle> inner,
                                               BiasSpec spec, const StepSizeRule& rule,
                                               const InnerProduct& inner_product,
                                               std::int64_t horizon);

}  // namespace psg
