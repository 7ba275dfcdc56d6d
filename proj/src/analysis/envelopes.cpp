#include "psg/analysis/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psg::analysis {

void EfficiencyParams::validate() const {
  if (!(mu > 0.0) || !(theta > 0.0)) {
    throw std::invalid_argument("efficiency params: mu and theta must be positive");
  }
  if (!(M1 >= 0.0) || !(M2 >= 0.0) || !(u_bar_norm >= 0.0)) {
    throw std::invalid_argument("efficiency params: growth constants must be nonnegative");
  }
  if (!(initial_error_sq > 0.0)) {
    throw std::invalid_argument("efficiency params: initial error must be positive");
  }
  if (L && !(*L > 0.0)) throw std::invalid_argument("efficiency params: L must be positive");
}

RecursionParams efficiency_constants(const EfficiencyParams& params) {
  params.validate();
  if (!(params.c1() > 1.0)) {
    throw std::invalid_argument("efficiency bound needs 2 mu theta > 1");
  }
  return lemma_constants(params.c1(), params.c2(), params.c3(), params.initial_error_sq);
}

double iterate_envelope(const RecursionParams& p, std::int64_t n) {
  return std::sqrt(p.K / (static_cast<double>(n) + p.nu));
}

double objective_envelope(const RecursionParams& p, double L, std::int64_t n) {
  return L * p.K / (2.0 * (static_cast<double>(n) + p.nu));
}

Envelopes predicted_envelopes(const EfficiencyParams& params, std::int64_t n_lo, std::int64_t n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("envelopes: bad n range");
  Envelopes out;
  out.constants = efficiency_constants(params);
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    out.n.push_back(n);
    out.iterate.push_back(iterate_envelope(out.constants, n));
    if (params.L) out.objective.push_back(objective_envelope(out.constants, *params.L, n));
  }
  return out;
}

PowerRuleBound power_rule_bound(double M1, double M2, double u_bar_norm, double theta, double gamma,
                                double D_S, std::int64_t N) {
  if (!(gamma > 0.5 && gamma < 1.0)) throw std::invalid_argument("power rule: gamma must be in (1/2, 1)");
  if (!(theta > 0.0) || N < 1) throw std::invalid_argument("power rule: theta > 0 and N >= 1 required");
  const double shift = M1 + 2.0 * M2 * u_bar_norm * u_bar_norm;
  PowerRuleBound out;
  out.horizon = N;
  double Q = 0.0;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double tau = theta / std::pow(static_cast<double>(n), gamma);
    Q = Q * (1.0 + 2.0 * tau * tau * M2) + tau * tau * shift;
    out.Q = std::max(out.Q, Q);
  }
  out.R = 2.0 * M2 * out.Q + shift;
  const double numerator = (1.0 - gamma) * D_S * D_S +
                           2.0 * out.R * theta * theta * gamma * (1.0 - gamma) / (2.0 * gamma - 1.0);
  out.bound = numerator / (2.0 * theta * std::pow(static_cast<double>(N + 1), 1.0 - gamma));
  return out;
}

std::optional<double> sqrt_rule_bound(std::optional<double> C_r, double theta, double D_C,
                                      double sqrt_M, std::int64_t N) {
  if (!C_r) return std::nullopt;
  if (!(theta > 0.0) || N < 1) throw std::invalid_argument("sqrt rule: theta > 0 and N >= 1 required");
  return *C_r * std::max(theta, 1.0 / theta) * D_C * sqrt_M / std::sqrt(static_cast<double>(N));
}

double fixed_horizon_bound(double D_C, double sqrt_M, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("fixed horizon: N must be >= 1");
  return D_C * sqrt_M / std::sqrt(static_cast<double>(N));
}

}  // namespace psg::analysis
