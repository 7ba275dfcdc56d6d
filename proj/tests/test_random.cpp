#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "psg/random/truncated_normal.hpp"

using namespace psg::random;

TEST(TruncatedNormal, RejectsInvalidSpecs) {
  EXPECT_THROW((TruncatedNormalSpec{2.0, 0.0, 0.5, 3.5}.validate()), std::invalid_argument);
  EXPECT_THROW((TruncatedNormalSpec{2.0, 0.25, 0.0, 3.5}.validate()), std::invalid_argument);
  EXPECT_THROW((TruncatedNormalSpec{2.0, 0.25, 2.5, 3.5}.validate()), std::invalid_argument);
  EXPECT_THROW((TruncatedNormalSpec{2.0, 0.25, 0.5, 1.5}.validate()), std::invalid_argument);
  EXPECT_NO_THROW(TruncatedNormalSpec{}.validate());
}

TEST(TruncatedNormal, DrawsAreReproducibleAndCounterKeyed) {
  const TruncatedNormalSpec spec;
  const auto a = draw(spec, 7, 12);
  const auto b = draw(spec, 7, 12);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.counter, 12u);
  EXPECT_EQ(a.master_seed, 7u);
  EXPECT_NE(draw(spec, 7, 13).value, a.value);
  EXPECT_NE(draw(spec, 8, 12).value, a.value);
}

TEST(TruncatedNormal, SampleStatisticsAndSupport) {
  const TruncatedNormalSpec spec;
  const int n = 100000;
  double sum = 0.0, sq = 0.0, inv = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double v = draw(spec, 2024, static_cast<std::uint64_t>(i)).value;
    ASSERT_GT(v, spec.lower);
    ASSERT_LT(v, spec.upper);
    sum += v;
    sq += v * v;
    inv += 1.0 / v;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 2.0, 0.005);
  EXPECT_NEAR(sq / n - mean * mean, spec.truncated_variance(), 0.002);
  EXPECT_NEAR(inv / n, spec.inverse_moment(1), 0.002);
}

TEST(TruncatedNormal, NarrowSupportStillRespected) {
  const TruncatedNormalSpec spec{2.0, 1.0, 1.9, 2.1};
  for (std::uint64_t i = 1; i <= 2000; ++i) {
    const double v = draw(spec, 1, i).value;
    ASSERT_GT(v, 1.9);
    ASSERT_LT(v, 2.1);
  }
}

TEST(TruncatedNormal, MomentsAgainstSimpsonRule) {
  const TruncatedNormalSpec spec{2.0, 0.7, 0.5, 3.0};
  const int m = 20000;
  const double h = (spec.upper - spec.lower) / m;
  double z = 0, m1 = 0, i1 = 0, i2 = 0;
  for (int k = 0; k <= m; ++k) {
    const double x = spec.lower + k * h;
    const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const double pdf = std::exp(-0.5 * std::pow((x - spec.mean) / spec.std_dev, 2));
    z += w * pdf;
    m1 += w * pdf * x;
    i1 += w * pdf / x;
    i2 += w * pdf / (x * x);
  }
  EXPECT_NEAR(spec.truncated_mean(), m1 / z, 1e-10);
  EXPECT_NEAR(spec.inverse_moment(1), i1 / z, 1e-10);
  EXPECT_NEAR(spec.inverse_moment(2), i2 / z, 1e-10);
}

TEST(TruncatedNormal, DefaultInverseMoments) {
  const TruncatedNormalSpec spec;
  EXPECT_NEAR(spec.inverse_moment(1), 0.50821, 1e-5);
  EXPECT_NEAR(spec.inverse_moment(2), 0.26275, 1e-5);
  EXPECT_NEAR(spec.truncated_mean(), 2.0, 1e-12);
}

TEST(EvaluationCounter, RejectsOutOfRange) {
  EXPECT_THROW(evaluation_counter(1, 1ULL << 24), std::invalid_argument);
  EXPECT_THROW(evaluation_counter(1ULL << 39, 1), std::invalid_argument);
}

TEST(EvaluationCounter, DisjointFromIterationCounters) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t n = 1; n <= 200; ++n) {
    for (std::uint64_t k = 1; k <= 50; ++k) {
      const auto c = evaluation_counter(n, k);
      EXPECT_GE(c, 1ULL << 63);
      EXPECT_TRUE(seen.insert(c).second);
    }
  }
}
