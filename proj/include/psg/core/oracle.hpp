#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

namespace psg {

using Vector = Eigen::VectorXd;
using InnerProduct = std::function<double(const Vector&, const Vector&)>;
using Projection = std::function<Vector(const Vector&)>;

inline double euclidean_inner(const Vector& a, const Vector& b) { return a.dot(b); }

/// Identifies the random element xi_n: it is a pure function of both fields.
struct SampleIndex {
  std::uint64_t master_seed = 0;
  std::int64_t n = 1;
};

struct OracleSample {
  Vector gradient;               // G(u, xi_n)
  double objective = 0.0;        // J(u, xi_n)
  double draw_value = 0.0;       // scalar summary of xi_n for telemetry
  std::uint64_t counter = 0;
};

/// Produces stochastic gradient samples G(u, xi) with E[G(u, xi)] ~ grad j(u).
class GradientOracle {
 public:
  virtual ~GradientOracle() = default;
  virtual OracleSample sample(const Vector& u, SampleIndex index) const = 0;
};

struct ObjectiveEvaluation {
  double estimate = 0.0;  // m-sample estimate of j(u)
  double gap = 0.0;       // paired estimate of j(u) - j(u_ref); NaN without a reference
};

/// Telemetry-only objective estimates. Must not consume the optimizer's draws.
class ObjectiveMonitor {
 public:
  virtual ~ObjectiveMonitor() = default;
  virtual ObjectiveEvaluation evaluate(const Vector& u, SampleIndex index) const = 0;
};

}  // namespace psg
