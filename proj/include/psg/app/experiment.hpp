#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"
#include "psg/analysis/envelopes.hpp"
#include "psg/analysis/model_constants.hpp"
#include "psg/app/config.hpp"
#include "psg/core/run.hpp"
#include "psg/heat/analytic_case.hpp"

namespace psg::app {

/// Everything a PSG run needs that does not depend on the seed.
struct PreparedExperiment {
  ExperimentConfig config;
  heat::AnalyticCase problem;
  fem::GridFunction initial;
  fem::GridFunction reference;
  double reference_objective = 0.0;  // exact expected objective at the reference
  StepSizeRule rule{PolyDecayStep{1.0, 0.0}};
  analysis::ModelConstants constants;
  analysis::GrowthConstants growth;
  double gradient_bound = 0.0;
  double lipschitz = 0.0;
  std::optional<analysis::RecursionParams> lemma;  // when 2 lambda theta > 1 for the poly rule
  nlohmann::json envelope;
};

/// Builds the problem, the reference control and the theory constants.
/// Throws ConfigError for settings the chosen experiment cannot use.
PreparedExperiment prepare(const ExperimentConfig& config);

struct RunOutcome {
  std::uint64_t seed = 0;
  RunRecord record;
  nlohmann::json summary;
};

/// One seeded trajectory; injects the configured bias unless `with_bias` is false.
RunOutcome run_prepared(const PreparedExperiment& prepared, std::uint64_t seed, bool with_bias = true);

/// trajectory.csv, summary.json and control_final.csv under `dir`.
void write_run(const PreparedExperiment& prepared, const RunOutcome& outcome, const std::filesystem::path& dir);

/// Runs the configured experiment once with config.master_seed and writes its artifacts.
RunOutcome cmd_run(const ExperimentConfig& config);

struct ReplicateOutcome {
  std::vector<RunOutcome> runs;
  std::vector<RunOutcome> unbiased;  // paired runs without bias when a bias is configured
  nlohmann::json aggregate;
};

/// Seeds are config.seed_list when given (its first k entries), else master_seed + s.
std::vector<std::uint64_t> replicate_seeds(const ExperimentConfig& config, int k);

/// k seeded runs plus aggregate.json; per-seed artifacts go to seed_<s>/.
/// Runs execute on up to `threads` workers (0 selects the hardware count).
ReplicateOutcome cmd_replicate(const ExperimentConfig& config, int k, bool write = true, unsigned threads = 0);

/// Mean/std of the seed curves and the envelope verdict.
nlohmann::json aggregate_runs(const PreparedExperiment& prepared, const std::vector<RunOutcome>& runs);

}  // namespace psg::app
