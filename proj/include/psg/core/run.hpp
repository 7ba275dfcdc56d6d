#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psg/core/oracle.hpp"
#include "psg/core/step_rule.hpp"

namespace psg {

struct PsgConfig {
  std::int64_t max_iterations = 1;
  StepSizeRule rule{PolyDecayStep{1.0, 0.0}};
  /// Averaging window start i (1-based); no averaging when empty.
  std::optional<std::int64_t> averaging_start;
  std::uint64_t master_seed = 0;
  Vector initial;
  /// Objective monitor runs at n = 1, n = N and every multiple of the cadence.
  std::int64_t telemetry_cadence = 1;
  int objective_samples = 100;

  void validate() const;
};

/// One row per iteration n, describing u_n (or the running average when
/// averaging is active) before the update.
struct RunRow {
  std::int64_t n = 0;
  double tau = 0.0;
  std::uint64_t counter = 0;
  double draw_value = 0.0;
  double j_hat = 0.0;         // J(u_n, xi_n)
  double j_hat_avg_m = 0.0;   // NaN when not evaluated this row
  double err_control = 0.0;   // ||tracked - u_ref||, NaN without reference
  double err_obj = 0.0;       // paired gap, NaN when not evaluated
  double grad_norm = 0.0;     // ||G(u_n, xi_n)||
  double wall_ms = 0.0;
};

struct RunRecord {
  std::vector<RunRow> rows;
  Vector final_iterate;             // u_{N+1}
  std::optional<Vector> averaged;   // averaged iterate over i..N
  bool tracks_average = false;      // telemetry refers to the running average
};

/// Failure inside the iteration loop, tagged with the iteration index.
class IterationError : public std::runtime_error {
 public:
  IterationError(std::int64_t n, const std::string& what)
      : std::runtime_error("iteration " + std::to_string(n) + ": " + what), n_(n) {}
  std::int64_t iteration() const { return n_; }

 private:
  std::int64_t n_;
};

/// Projected stochastic gradient: for n = 1..N draw xi_n, evaluate
/// G(u_n, xi_n), step by tau_n and project. Deterministic in the master seed.
RunRecord run_psg(const GradientOracle& oracle, const Projection& project, const PsgConfig& config,
                  const InnerProduct& inner, const Vector* reference = nullptr,
                  const ObjectiveMonitor* monitor = nullptr);

}  // namespace psg
