#include "psg/core/run.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "psg/core/averaging.hpp"

namespace psg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void PsgConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("psg: max_iterations must be >= 1");
  if (averaging_start && (*averaging_start < 1 || *averaging_start > max_iterations)) {
    throw std::invalid_argument("psg: averaging start must lie in [1, N]");
  }
  if (objective_samples < 1) throw std::invalid_argument("psg: objective sample count must be >= 1");
  if (telemetry_cadence < 1) throw std::invalid_argument("psg: telemetry cadence must be >= 1");
  if (initial.size() == 0) throw std::invalid_argument("psg: empty initial iterate");
}

RunRecord run_psg(const GradientOracle& oracle, const Projection& project, const PsgConfig& config,
                  const InnerProduct& inner, const Vector* reference, const ObjectiveMonitor* monitor) {
  config.validate();
  if (reference && reference->size() != config.initial.size()) {
    throw std::invalid_argument("psg: reference and initial iterate differ in size");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t N = config.max_iterations;

  RunRecord record;
  record.rows.reserve(static_cast<std::size_t>(N));
  record.tracks_average = config.averaging_start.has_value();
  RunningAverage average;

  Vector u = config.initial;
  Vector next;
  for (std::int64_t n = 1; n <= N; ++n) {
    const SampleIndex index{config.master_seed, n};
    const double tau = config.rule.tau(n);

    OracleSample s;
    try {
      s = oracle.sample(u, index);
    } catch (const std::exception& e) {
      throw IterationError(n, e.what());
    }
    if (s.gradient.size() != u.size()) throw IterationError(n, "gradient has the wrong size");

    RunRow row;
    row.n = n;
    row.tau = tau;
    row.counter = s.counter;
    row.draw_value = s.draw_value;
    row.j_hat = s.objective;
    row.grad_norm = std::sqrt(std::max(0.0, inner(s.gradient, s.gradient)));

    const Vector* tracked = &u;
    Vector averaged_now;
    if (config.averaging_start && n >= *config.averaging_start) {
      average.add(tau, u);
      averaged_now = average.value();
      tracked = &averaged_now;
    }
    row.err_control = kNaN;
    if (reference) {
      const Vector d = *tracked - *reference;
      row.err_control = std::sqrt(std::max(0.0, inner(d, d)));
    }
    row.j_hat_avg_m = kNaN;
    row.err_obj = kNaN;
    if (monitor && (n == 1 || n == N || n % config.telemetry_cadence == 0)) {
      try {
        const ObjectiveEvaluation ev = monitor->evaluate(*tracked, index);
        row.j_hat_avg_m = ev.estimate;
        row.err_obj = ev.gap;
      } catch (const std::exception& e) {
        throw IterationError(n, e.what());
      }
    }

    next = u - tau * s.gradient;
    u = project(next);
    if (!u.allFinite()) throw IterationError(n, "non-finite iterate");

    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    record.rows.push_back(row);
  }
  record.final_iterate = std::move(u);
  if (!average.empty()) record.averaged = average.value();
  return record;
}

}  // namespace psg
