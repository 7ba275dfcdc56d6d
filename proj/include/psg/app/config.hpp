#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "psg/random/truncated_normal.hpp"

namespace psg::app {

/// Invalid or unreadable experiment configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { strongly_convex, convex, fem_mms, lemma_oracle };

std::string to_string(ExperimentKind kind);

struct StepRuleSpec {
  std::string kind;  // constant, poly, sqrt, fixed_horizon, power
  double tau = 0.0;
  double theta = 0.0;
  double nu = 0.0;
  bool nu_from_lemma = false;  // "nu": "lemma"
  double diameter = 1.0;
  double sqrt_m = 1.0;
  std::int64_t horizon = 0;    // 0 selects the run length
  double gamma = 0.75;
};

struct BiasConfig {
  double magnitude = 0.0;
  double exponent = 0.0;
  std::string direction = "fixed";  // fixed | alternating
};

struct ReferenceConfig {
  std::string kind = "expected";  // expected | analytic | long_run
  int refine = 2;
  std::int64_t iterations = 10000;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::strongly_convex;
  int n_div = 32;
  std::int64_t iterations = 1000;
  StepRuleSpec step_rule;
  random::TruncatedNormalSpec field;
  std::uint64_t master_seed = 7;
  double lambda = 2.0;
  double a_bar = 2.0;
  double box_lower = -1.0;
  double box_upper = 1.0;
  int objective_samples = 100;
  std::optional<std::int64_t> averaging_start;
  std::string output_dir = "psg_out";
  std::optional<BiasConfig> bias;
  int seeds = 0;
  std::vector<std::uint64_t> seed_list;
  std::int64_t telemetry_cadence = 1;
  std::string initial_control = "default";  // default | zero
  ReferenceConfig reference;
  std::optional<std::pair<double, double>> fit_window;
  std::vector<int> levels{8, 16, 32, 64};
  int trials = 100;
  std::int64_t horizon = 100000;

  /// Normalized echo including defaults.
  nlohmann::json to_json() const;
};

/// Defaults depend on the experiment: the strongly convex case uses
/// lambda = 2 and theta/(n + nu) with theta = 1/3; the convex case uses
/// lambda = 0, theta D/(sqrt(M n)) with theta = 500, D = 1, sqrt(M) = 3.9 and
/// averaging from i = 1. Unknown keys are rejected at every level.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// PSG_OUTPUT_DIR, when set and nonempty, replaces output_dir.
void apply_environment(ExperimentConfig& config);

}  // namespace psg::app
