#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace psg::analysis {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double n_lo = 0.0;
  double n_hi = 0.0;
  std::size_t points = 0;
  std::size_t excluded = 0;  // nonpositive or non-finite errors inside the window
};

/// Least squares of log(error) on log(n) over n in [n_lo, n_hi].
/// Without a window the last 90% of the n range is used.
/// Throws std::invalid_argument with fewer than `min_points` usable points.
RateFit fit_rate(std::span<const double> n, std::span<const double> error,
                 std::optional<double> n_lo = std::nullopt, std::optional<double> n_hi = std::nullopt,
                 std::size_t min_points = 5);

}  // namespace psg::analysis
