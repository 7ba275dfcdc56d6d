// psg: run the heat-control experiments, the manufactured-solution study and
// the recursion-lemma oracle. Exit codes: 0 ok, 1 internal error, 2 bad
// configuration or arguments, 3 solver or iteration failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "psg/app/config.hpp"
#include "psg/app/experiment.hpp"
#include "psg/app/studies.hpp"
#include "psg/core/run.hpp"
#include "psg/fem/conjugate_gradient.hpp"

namespace {

using nlohmann::json;

int fail(int code, const std::string& type, const std::string& message, json extra = json::object()) {
  json err{{"type", type}, {"message", message}, {"exit_code", code}};
  err.update(extra);
  std::cerr << json{{"error", err}}.dump() << std::endl;
  return code;
}

std::string output_dir(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PSG_OUTPUT_DIR"); env && *env) return env;
  return "psg_out";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace psg::app;

  CLI::App app{"Projected stochastic gradient for optimal control of the heat equation with random conductivity"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
  run->add_option("config", run_config, "config file")->required();

  std::string rep_config;
  int seeds = 0;
  unsigned threads = 0;
  auto* rep = app.add_subcommand("replicate", "run k seeds and aggregate");
  rep->add_option("config", rep_config, "config file")->required();
  rep->add_option("--seeds", seeds, "number of seeds (default: config 'seeds')");
  rep->add_option("--threads", threads, "worker threads (0 = hardware)");

  std::vector<int> levels{8, 16, 32, 64};
  std::optional<std::string> mms_out;
  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms->add_option("--levels", levels, "mesh levels")->delimiter(',');
  mms->add_option("--out", mms_out, "output directory");

  int trials = 100;
  std::int64_t horizon = 100000;
  std::uint64_t lemma_seed = 1;
  std::optional<std::string> lemma_out;
  auto* lemma = app.add_subcommand("lemma", "brute-force check of the recursion bound");
  lemma->add_option("--trials", trials, "random parameter tuples")->check(CLI::PositiveNumber);
  lemma->add_option("--horizon", horizon, "iterations per tuple")->check(CLI::PositiveNumber);
  lemma->add_option("--seed", lemma_seed, "tuple generator seed");
  lemma->add_option("--out", lemma_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "usage", e.what());
  }

  try {
    if (*run) {
      ExperimentConfig config = load_config(run_config);
      apply_environment(config);
      json status{{"command", "run"}, {"experiment", to_string(config.experiment)}, {"output_dir", config.output_dir}};
      switch (config.experiment) {
        case ExperimentKind::fem_mms:
          status["result"] = cmd_mms(config.levels, config.output_dir);
          break;
        case ExperimentKind::lemma_oracle:
          status["result"] = cmd_lemma(config.trials, config.horizon, config.master_seed, config.output_dir);
          break;
        default: {
          const RunOutcome out = cmd_run(config);
          status["final"] = out.summary["final"];
          status["fits"] = out.summary["fits"];
        }
      }
      std::cout << status.dump(2) << std::endl;
    } else if (*rep) {
      ExperimentConfig config = load_config(rep_config);
      apply_environment(config);
      const int k = seeds > 0 ? seeds : config.seeds;
      const ReplicateOutcome out = cmd_replicate(config, k, true, threads);
      json status{{"command", "replicate"},
                  {"output_dir", config.output_dir},
                  {"runs", out.runs.size()},
                  {"partial", out.aggregate["partial"]},
                  {"final_err_control_mean", out.aggregate["final_err_control_mean"]},
                  {"envelope", out.aggregate["envelope"]}};
      if (out.aggregate.contains("bias")) status["bias"] = out.aggregate["bias"];
      std::cout << status.dump(2) << std::endl;
      if (out.aggregate["partial"].get<bool>()) {
        return fail(3, "partial", "some seeded runs failed", {{"failures", out.aggregate["failures"]}});
      }
    } else if (*mms) {
      std::cout << cmd_mms(levels, output_dir(mms_out)).dump(2) << std::endl;
    } else if (*lemma) {
      std::cout << cmd_lemma(trials, horizon, lemma_seed, output_dir(lemma_out)).dump(2) << std::endl;
    }
  } catch (const ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const psg::IterationError& e) {
    return fail(3, "iteration", e.what(), {{"iteration", e.iteration()}});
  } catch (const psg::fem::SolverError& e) {
    return fail(3, "solver", e.what(), {{"cg_iterations", e.iterations()}, {"relative_residual", e.relative_residual()}});
  } catch (const std::invalid_argument& e) {
    return fail(2, "config", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
  return 0;
}
