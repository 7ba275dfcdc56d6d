#include "psg/analysis/rate_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace psg::analysis {

RateFit fit_rate(std::span<const double> n, std::span<const double> error, std::optional<double> n_lo,
                 std::optional<double> n_hi, std::size_t min_points) {
  if (n.size() != error.size()) throw std::invalid_argument("fit_rate: size mismatch");
  if (n.empty()) throw std::invalid_argument("fit_rate: empty series");
  const auto [mn, mx] = std::minmax_element(n.begin(), n.end());
  RateFit fit;
  fit.n_lo = n_lo.value_or(*mn + 0.1 * (*mx - *mn));
  fit.n_hi = n_hi.value_or(*mx);

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < fit.n_lo || n[i] > fit.n_hi) continue;
    if (!(n[i] > 0.0)) throw std::invalid_argument("fit_rate: n must be positive");
    if (!(error[i] > 0.0) || !std::isfinite(error[i])) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(std::log(n[i]));
    ys.push_back(std::log(error[i]));
  }
  fit.points = xs.size();
  if (fit.points < std::max<std::size_t>(min_points, 2)) {
    throw std::invalid_argument("fit_rate: too few positive points in window");
  }

  const double k = static_cast<double>(fit.points);
  double mx_ = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx_ += xs[i];
    my += ys[i];
  }
  mx_ /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx_) * (xs[i] - mx_);
    sxy += (xs[i] - mx_) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate: n values are all equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx_;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace psg::analysis
