#include "psg/core/averaging.hpp"

#include <stdexcept>

namespace psg {

void RunningAverage::add(double tau, const Vector& u) {
  if (!(tau > 0.0)) throw std::invalid_argument("averaging: weights must be positive");
  if (count_ == 0) {
    weighted_sum_ = tau * u;
  } else {
    if (u.size() != weighted_sum_.size()) throw std::invalid_argument("averaging: size mismatch");
    weighted_sum_.noalias() += tau * u;
  }
  weight_sum_ += tau;
  ++count_;
}

Vector RunningAverage::value() const {
  if (count_ == 0) throw std::logic_error("averaging: empty window");
  return weighted_sum_ / weight_sum_;
}

Vector averaged_iterate(std::span<const double> taus, std::span<const Vector> iterates, std::int64_t i,
                        std::int64_t N) {
  if (taus.size() != iterates.size()) throw std::invalid_argument("averaging: history size mismatch");
  if (i < 1 || i > N || N > static_cast<std::int64_t>(taus.size())) {
    throw std::invalid_argument("averaging: empty or out-of-range window");
  }
  RunningAverage avg;
  for (std::int64_t n = i; n <= N; ++n) avg.add(taus[n - 1], iterates[n - 1]);
  return avg.value();
}

std::vector<double> averaging_weights(const StepSizeRule& rule, std::int64_t i, std::int64_t N) {
  if (i < 1 || i > N) throw std::invalid_argument("averaging: empty window");
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(N - i + 1));
  double total = 0.0;
  for (std::int64_t n = i; n <= N; ++n) {
    w.push_back(rule.tau(n));
    total += w.back();
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace psg
