#include "psg/random/truncated_normal.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace psg::random {

namespace {

constexpr std::uint64_t kEvaluationBit = 1ULL << 63;

std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t counter) {
  return mix64(mix64(master_seed) ^ (counter + 0x9e3779b97f4a7c15ULL));
}

struct Standardized {
  double alpha, beta, z;
  double phi_alpha, phi_beta;
};

Standardized standardize(const TruncatedNormalSpec& s) {
  const boost::math::normal_distribution<double> n01;
  const double a = (s.lower - s.mean) / s.std_dev;
  const double b = (s.upper - s.mean) / s.std_dev;
  return {a, b, boost::math::cdf(n01, b) - boost::math::cdf(n01, a), boost::math::pdf(n01, a),
          boost::math::pdf(n01, b)};
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void TruncatedNormalSpec::validate() const {
  if (!(std_dev > 0.0) || !std::isfinite(std_dev)) {
    throw std::invalid_argument("truncated normal: std must be positive");
  }
  if (!(lower > 0.0)) {
    throw std::invalid_argument("truncated normal: lower bound must be positive (conductivity)");
  }
  if (!(lower < mean && mean < upper) || !std::isfinite(upper)) {
    throw std::invalid_argument("truncated normal: need lower < mean < upper");
  }
}

double TruncatedNormalSpec::truncated_mean() const {
  const auto s = standardize(*this);
  return mean + std_dev * (s.phi_alpha - s.phi_beta) / s.z;
}

double TruncatedNormalSpec::truncated_variance() const {
  const auto s = standardize(*this);
  const double t1 = (s.alpha * s.phi_alpha - s.beta * s.phi_beta) / s.z;
  const double t2 = (s.phi_alpha - s.phi_beta) / s.z;
  return std_dev * std_dev * (1.0 + t1 - t2 * t2);
}

double TruncatedNormalSpec::inverse_moment(int k) const {
  validate();
  const auto s = standardize(*this);
  const boost::math::normal_distribution<double> dist(mean, std_dev);
  auto integrand = [&](double x) { return boost::math::pdf(dist, x) * std::pow(x, -k); };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, lower, upper, 15, 1e-14);
  return integral / s.z;
}

SampleDraw draw(const TruncatedNormalSpec& spec, std::uint64_t master_seed, std::uint64_t counter) {
  std::mt19937_64 engine(stream_key(master_seed, counter));
  std::normal_distribution<double> normal(spec.mean, spec.std_dev);
  for (int i = 0; i < kMaxRejections; ++i) {
    const double v = normal(engine);
    if (v > spec.lower && v < spec.upper) return {master_seed, counter, v};
  }
  throw std::runtime_error("truncated normal: rejection cap reached; acceptance region too small");
}

std::uint64_t evaluation_counter(std::uint64_t n, std::uint64_t k) {
  if (n >= (1ULL << 39) || k >= (1ULL << 24)) {
    throw std::invalid_argument("evaluation counter: n or k out of range");
  }
  return kEvaluationBit | (n << 24) | k;
}

}  // namespace psg::random
