#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "psg/analysis/recursion.hpp"

namespace psg::analysis {

/// Constants for the step rule theta / (n + nu) under the growth condition
/// E||G(u)||^2 <= M1 + M2 ||u||^2.
struct EfficiencyParams {
  double mu = 0.0;     // strong convexity modulus
  double theta = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
  std::optional<double> L;   // gradient Lipschitz constant
  double u_bar_norm = 0.0;   // ||u_bar||
  double initial_error_sq = 0.0;  // e1 = ||u_1 - u_bar||^2

  void validate() const;
  double c1() const { return 2.0 * mu * theta; }
  double c2() const { return 2.0 * theta * theta * M2; }
  double c3() const { return theta * theta * (M1 + 2.0 * M2 * u_bar_norm * u_bar_norm); }
};

/// Recursion constants for the params; throws when c1 = 2 mu theta <= 1.
RecursionParams efficiency_constants(const EfficiencyParams& params);

/// sqrt(K / (n + nu)), bounding E||u_n - u_bar||.
double iterate_envelope(const RecursionParams& p, std::int64_t n);
/// L K / (2 (n + nu)), bounding E[j(u_n) - j(u_bar)].
double objective_envelope(const RecursionParams& p, double L, std::int64_t n);

struct Envelopes {
  RecursionParams constants;
  std::vector<std::int64_t> n;
  std::vector<double> iterate;
  std::vector<double> objective;  // empty when L is absent
};

Envelopes predicted_envelopes(const EfficiencyParams& params, std::int64_t n_lo, std::int64_t n_hi);

/// Bound for theta / n^gamma with averaging, without assuming a bounded
/// feasible set. Q is the sup of the product recursion, computed over the
/// finite horizon only (`truncated` is then true).
struct PowerRuleBound {
  double Q = 0.0;
  double R = 0.0;
  double bound = 0.0;
  std::int64_t horizon = 0;
  bool truncated = true;
};

PowerRuleBound power_rule_bound(double M1, double M2, double u_bar_norm, double theta, double gamma,
                                double D_S, std::int64_t N);

/// C(r) max(theta, 1/theta) D_C sqrt(M) / sqrt(N) for theta D_C / (sqrt(M n)) steps.
/// Without C(r) only the N^{-1/2} shape is known, so nothing is returned.
std::optional<double> sqrt_rule_bound(std::optional<double> C_r, double theta, double D_C,
                                      double sqrt_M, std::int64_t N);

/// D_C sqrt(M) / sqrt(N) for the fixed-horizon constant step.
double fixed_horizon_bound(double D_C, double sqrt_M, std::int64_t N);

}  // namespace psg::analysis
