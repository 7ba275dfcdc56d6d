#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psg/core/oracle.hpp"
#include "psg/core/step_rule.hpp"

namespace psg {

/// Running tau-weighted mean: after add(tau_i, u_i) ... add(tau_n, u_n) the
/// value is sum tau_k u_k / sum tau_k. Holds one vector regardless of length.
class RunningAverage {
 public:
  void add(double tau, const Vector& u);
  bool empty() const { return count_ == 0; }
  std::int64_t count() const { return count_; }
  double weight_sum() const { return weight_sum_; }
  /// Throws std::logic_error when nothing has been added.
  Vector value() const;

 private:
  Vector weighted_sum_;
  double weight_sum_ = 0.0;
  std::int64_t count_ = 0;
};

/// Weighted average of iterates i..N (1-based, inclusive) with gamma_n = tau_n / sum tau_l.
Vector averaged_iterate(std::span<const double> taus, std::span<const Vector> iterates, std::int64_t i,
                        std::int64_t N);

/// gamma_i, ..., gamma_N for the given rule.
std::vector<double> averaging_weights(const StepSizeRule& rule, std::int64_t i, std::int64_t N);

}  // namespace psg
