#pragma once

#include <cstdint>

namespace psg::random {

/// Normal(mean, std_dev) conditioned on (lower, upper).
struct TruncatedNormalSpec {
  double mean = 2.0;
  double std_dev = 0.25;
  double lower = 0.5;
  double upper = 3.5;

  /// Throws std::invalid_argument unless 0 < lower < mean < upper and std_dev > 0.
  void validate() const;

  /// Closed-form moments of the truncated law.
  double truncated_mean() const;
  double truncated_variance() const;

  /// E[X^-k] by adaptive Gauss-Kronrod quadrature against the truncated density.
  double inverse_moment(int k) const;
};

/// A realized draw. Identical (master_seed, counter, spec) reproduce `value`.
struct SampleDraw {
  std::uint64_t master_seed = 0;
  std::uint64_t counter = 0;
  double value = 0.0;
};

/// Rejection sampling from Normal(mean, std_dev) on a generator keyed by
/// (master_seed, counter). Draws for different counters are independent
/// streams; nothing is shared between calls.
SampleDraw draw(const TruncatedNormalSpec& spec, std::uint64_t master_seed, std::uint64_t counter);

/// Counter for the k-th auxiliary evaluation sample at iteration n: the top
/// bit set, then n (39 bits) and k (24 bits). Injective and disjoint from the
/// plain iteration counters 1, 2, ... used by the optimizer.
std::uint64_t evaluation_counter(std::uint64_t n, std::uint64_t k);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

inline constexpr int kMaxRejections = 1'000'000;

}  // namespace psg::random
