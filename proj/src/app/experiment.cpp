#include "psg/app/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "psg/analysis/rate_fit.hpp"
#include "psg/app/artifacts.hpp"
#include "psg/core/bias.hpp"
#include "psg/heat/expected_objective.hpp"
#include "psg/heat/oracle.hpp"

#ifndef PSG_VERSION
#define PSG_VERSION "0.0.0"
#endif

namespace psg::app {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

StepSizeRule make_rule(const StepRuleSpec& s, std::int64_t iterations, double nu) {
  try {
    if (s.kind == "constant") return ConstantStep{s.tau};
    if (s.kind == "poly") return PolyDecayStep{s.theta, nu};
    if (s.kind == "sqrt") return SqrtDecayStep{s.theta, s.diameter, s.sqrt_m};
    if (s.kind == "fixed_horizon") return FixedHorizonStep{s.diameter, s.sqrt_m, s.horizon > 0 ? s.horizon : iterations};
    if (s.kind == "power") return PowerDecayStep{s.theta, s.gamma};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("step_rule: ") + e.what());
  }
  throw ConfigError("step_rule.kind: unknown rule '" + s.kind + "'");
}

// Coarse node (i, j) sits at fine node (i r, j r).
fem::GridFunction inject(const fem::Mesh& coarse, const fem::Mesh& fine, const Vector& fine_values) {
  const int n = coarse.n_div();
  const int r = fine.n_div() / n;
  Vector v(static_cast<Eigen::Index>(coarse.num_nodes()));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      v[i + j * (n + 1)] = fine_values[i * r + j * r * (fine.n_div() + 1)];
    }
  }
  return fem::GridFunction(coarse, std::move(v));
}

heat::AnalyticParams analytic_params(const ExperimentConfig& c) {
  heat::AnalyticParams p;
  p.lambda = c.lambda;
  p.a_bar = c.a_bar;
  p.box_lower = c.box_lower;
  p.box_upper = c.box_upper;
  p.field = c.field;
  return p;
}

fem::GridFunction long_run_reference(const PreparedExperiment& prep) {
  const auto& c = prep.config;
  auto fine_space = fem::FunctionSpace::create(c.n_div * c.reference.refine);
  const heat::AnalyticCase fine = analytic_case(prep.problem.kind, fine_space, analytic_params(c));
  const auto oracle = std::make_shared<heat::HeatOracle>(fine.config);
  PsgConfig run;
  run.max_iterations = c.reference.iterations;
  run.rule = prep.rule;
  if (c.averaging_start) run.averaging_start = 1;
  run.master_seed = random::mix64(c.master_seed ^ 0x5eedf00dULL);
  run.initial = c.initial_control == "zero" ? fine_space->zeros().values() : fine.initial.values();
  run.telemetry_cadence = c.reference.iterations;
  const RunRecord rec = run_psg(*oracle, heat::box_projection(fine.config), run, heat::mass_inner(fine.config));
  return inject(prep.problem.config->mesh(), fine_space->mesh(),
                rec.averaged ? *rec.averaged : rec.final_iterate);
}

json fit_json(const std::vector<double>& n, const std::vector<double>& e, const ExperimentConfig& c) {
  try {
    const auto fit = c.fit_window ? analysis::fit_rate(n, e, c.fit_window->first, c.fit_window->second)
                                  : analysis::fit_rate(n, e);
    return json{{"slope", fit.slope},   {"intercept", fit.intercept}, {"r2", fit.r2},
                {"n_lo", fit.n_lo},     {"n_hi", fit.n_hi},           {"points", fit.points},
                {"excluded", fit.excluded}};
  } catch (const std::invalid_argument&) {
    return nullptr;
  }
}

}  // namespace

PreparedExperiment prepare(const ExperimentConfig& config) {
  if (config.experiment != ExperimentKind::strongly_convex && config.experiment != ExperimentKind::convex) {
    throw ConfigError("experiment '" + to_string(config.experiment) + "' is not a PSG run");
  }
  PreparedExperiment p;
  p.config = config;
  auto space = fem::FunctionSpace::create(config.n_div);
  const auto kind = config.experiment == ExperimentKind::convex ? heat::CaseKind::convex
                                                                 : heat::CaseKind::strongly_convex;
  try {
    p.problem = analytic_case(kind, space, analytic_params(config));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  const auto& model = *p.problem.config;
  p.initial = config.initial_control == "zero" ? space->zeros() : p.problem.initial;

  const heat::ExpectedObjective expected(p.problem.config);
  p.lipschitz = expected.lipschitz_bound();

  p.constants = analysis::model_constants(config.field.lower, std::numbers::sqrt2);
  const double target_norm = space->l2_norm(model.target);
  const double extra_norm = model.extra_source ? space->l2_norm(*model.extra_source) : 0.0;
  const double control_norm = std::max(std::abs(config.box_lower), std::abs(config.box_upper));
  p.growth = analysis::growth_constants(p.constants, config.lambda, target_norm, extra_norm);
  p.gradient_bound = analysis::gradient_bound(p.constants, config.lambda, target_norm, extra_norm, control_norm);

  // The lemma constants need the reference, and a long-run reference needs the rule;
  // resolve the expected-objective minimizer first in that case.
  const int fista_iterations = kind == heat::CaseKind::convex ? 20000 : 2000;
  fem::GridFunction minimizer = heat::minimize_expected(expected, p.problem.u_bar, fista_iterations);
  if (config.reference.kind == "analytic") {
    p.reference = p.problem.u_bar;
  } else {
    p.reference = minimizer;
  }

  json env{{"available", false}};
  if (config.step_rule.kind == "poly" && config.lambda > 0.0) {
    analysis::EfficiencyParams ep;
    ep.mu = config.lambda;
    ep.theta = config.step_rule.theta;
    ep.M1 = p.growth.M1;
    ep.M2 = p.growth.M2;
    ep.L = p.lipschitz;
    ep.u_bar_norm = space->l2_norm(minimizer);
    ep.initial_error_sq = std::pow(space->l2_norm(p.initial.values() - minimizer.values()), 2);
    try {
      p.lemma = analysis::efficiency_constants(ep);
      env = json{{"available", true},
                 {"mu", ep.mu},
                 {"theta", ep.theta},
                 {"M1", ep.M1},
                 {"M2", ep.M2},
                 {"L", *ep.L},
                 {"u_bar_norm", ep.u_bar_norm},
                 {"c1", p.lemma->c1},
                 {"c2", p.lemma->c2},
                 {"c3", p.lemma->c3},
                 {"e1", p.lemma->e1},
                 {"K", p.lemma->K},
                 {"nu", p.lemma->nu},
                 {"admissible", analysis::is_admissible(*p.lemma)}};
    } catch (const std::invalid_argument& e) {
      env = json{{"available", false}, {"reason", e.what()}};
    }
  } else if (config.step_rule.kind == "fixed_horizon") {
    const std::int64_t N = config.step_rule.horizon > 0 ? config.step_rule.horizon : config.iterations;
    env = json{{"available", true},
               {"objective_bound", analysis::fixed_horizon_bound(config.step_rule.diameter, config.step_rule.sqrt_m, N)}};
  } else if (config.step_rule.kind == "sqrt") {
    env = json{{"available", false},
               {"reason", "constant C(r) unknown; only the N^-1/2 order applies"},
               {"order", -0.5}};
  } else if (config.step_rule.kind == "power") {
    const double D_S = (config.box_upper - config.box_lower);
    const auto b = analysis::power_rule_bound(p.growth.M1, p.growth.M2, space->l2_norm(minimizer),
                                              config.step_rule.theta, config.step_rule.gamma, D_S,
                                              config.iterations);
    env = json{{"available", true}, {"objective_bound", b.bound}, {"Q", b.Q}, {"R", b.R},
               {"horizon", b.horizon}, {"truncated", b.truncated}};
  }
  p.envelope = env;

  double nu = config.step_rule.nu;
  if (config.step_rule.nu_from_lemma) {
    if (!p.lemma) throw ConfigError("step_rule.nu: \"lemma\" needs lambda > 0 and 2 lambda theta > 1");
    nu = p.lemma->nu;
  }
  p.rule = make_rule(config.step_rule, config.iterations, nu);
  if (p.lemma) p.envelope["applies"] = config.step_rule.kind == "poly" && std::abs(nu - p.lemma->nu) <= 1e-9 * (1.0 + std::abs(nu));

  if (config.reference.kind == "long_run") p.reference = long_run_reference(p);
  p.reference_objective = expected.value(p.reference);
  return p;
}

RunOutcome run_prepared(const PreparedExperiment& prep, std::uint64_t seed, bool with_bias) {
  const auto& c = prep.config;
  const auto model = prep.problem.config;
  const InnerProduct inner = heat::mass_inner(model);

  std::shared_ptr<const GradientOracle> oracle = std::make_shared<heat::HeatOracle>(model);
  if (with_bias && c.bias) {
    BiasSpec spec;
    spec.schedule = BiasSchedule{c.bias->magnitude, c.bias->exponent};
    spec.direction = c.bias->direction == "alternating" ? BiasDirection::alternating : BiasDirection::fixed;
    Vector d = Vector::Ones(model->space->dimension());
    const auto mask = model->mesh().boundary_mask();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (mask[static_cast<std::size_t>(i)]) d[i] = 0.0;
    }
    spec.unit_direction = d;
    try {
      oracle = wrap_with_bias(oracle, spec, prep.rule, inner, c.iterations);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  PsgConfig run;
  run.max_iterations = c.iterations;
  run.rule = prep.rule;
  run.averaging_start = c.averaging_start;
  run.master_seed = seed;
  run.initial = prep.initial.values();
  run.telemetry_cadence = c.telemetry_cadence;
  run.objective_samples = c.objective_samples;

  const heat::HeatObjectiveMonitor monitor(model, c.objective_samples, prep.reference);
  const Vector reference = prep.reference.values();

  RunOutcome out;
  out.seed = seed;
  out.record = run_psg(*oracle, heat::box_projection(model), run, inner, &reference, &monitor);

  const auto& rows = out.record.rows;
  std::vector<double> n, e_obj, e_ctl;
  double max_grad = 0.0;
  std::int64_t violations = 0;
  for (const RunRow& r : rows) {
    n.push_back(static_cast<double>(r.n));
    e_obj.push_back(r.err_obj);
    e_ctl.push_back(r.err_control);
    max_grad = std::max(max_grad, r.grad_norm);
    if (r.grad_norm > prep.gradient_bound) ++violations;
  }
  double last_obj = kNaN;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (std::isfinite(it->err_obj)) {
      last_obj = it->err_obj;
      break;
    }
  }
  const auto& space = *model->space;
  const double final_err = space.l2_norm(out.record.final_iterate - reference);

  json& s = out.summary;
  s["schema"] = "psg-summary";
  s["schema_version"] = 1;
  s["code_version"] = PSG_VERSION;
  s["experiment"] = to_string(c.experiment);
  s["seed"] = seed;
  s["config"] = c.to_json();
  s["bias_applied"] = with_bias && c.bias.has_value();
  s["reference"] = {{"kind", c.reference.kind},
                    {"norm", space.l2_norm(prep.reference)},
                    {"expected_objective", prep.reference_objective},
                    {"distance_to_analytic", space.l2_norm(prep.reference.values() - prep.problem.u_bar.values())}};
  s["final"] = {{"err_control", finite_or_null(rows.empty() ? kNaN : rows.back().err_control)},
                {"err_obj", finite_or_null(last_obj)},
                {"final_iterate_err", final_err},
                {"averaged_err", out.record.averaged ? finite_or_null(space.l2_norm(*out.record.averaged - reference))
                                                     : json(nullptr)},
                {"tracks_average", out.record.tracks_average}};
  s["fits"] = {{"err_obj", fit_json(n, e_obj, c)}, {"err_control", fit_json(n, e_ctl, c)}};
  s["gradient"] = {{"max_norm", max_grad}, {"bound", prep.gradient_bound}, {"violations", violations}};
  s["envelope"] = prep.envelope;
  s["step_rule"] = {{"name", prep.rule.name()},
                    {"robbins_monro", prep.rule.robbins_monro_satisfied()},
                    {"decay_exponent", prep.rule.decay_exponent()},
                    {"tau_1", prep.rule.tau(1)}};
  s["theory"] = {{"poincare", prep.constants.poincare},
                 {"C1", prep.constants.C1},
                 {"C2", prep.constants.C2},
                 {"M1", prep.growth.M1},
                 {"M2", prep.growth.M2},
                 {"lipschitz", prep.lipschitz}};
  return out;
}

void write_run(const PreparedExperiment& prep, const RunOutcome& outcome, const std::filesystem::path& dir) {
  write_trajectory_csv(dir / "trajectory.csv", outcome.record);
  write_json(dir / "summary.json", outcome.summary);
  write_control_csv(dir / "control_final.csv", prep.problem.config->mesh(), outcome.record.final_iterate);
}

RunOutcome cmd_run(const ExperimentConfig& config) {
  const PreparedExperiment prep = prepare(config);
  RunOutcome out = run_prepared(prep, config.master_seed);
  write_run(prep, out, config.output_dir);
  return out;
}

std::vector<std::uint64_t> replicate_seeds(const ExperimentConfig& config, int k) {
  if (k < 2) throw ConfigError("replicate: need at least 2 seeds");
  std::vector<std::uint64_t> seeds;
  if (!config.seed_list.empty()) {
    if (static_cast<int>(config.seed_list.size()) < k) {
      throw ConfigError("seed_list: fewer entries than requested seeds");
    }
    seeds.assign(config.seed_list.begin(), config.seed_list.begin() + k);
  } else {
    for (int s = 0; s < k; ++s) seeds.push_back(config.master_seed + static_cast<std::uint64_t>(s));
  }
  return seeds;
}

json aggregate_runs(const PreparedExperiment& prep, const std::vector<RunOutcome>& runs) {
  json agg;
  if (runs.empty()) return agg;
  const std::size_t rows = runs.front().record.rows.size();
  const double k = static_cast<double>(runs.size());
  std::vector<double> n(rows), mc(rows), sc(rows), mo(rows), so(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double sum_c = 0, sq_c = 0, sum_o = 0, sq_o = 0;
    for (const auto& r : runs) {
      const RunRow& row = r.record.rows.at(i);
      sum_c += row.err_control;
      sq_c += row.err_control * row.err_control;
      sum_o += row.err_obj;
      sq_o += row.err_obj * row.err_obj;
    }
    n[i] = static_cast<double>(runs.front().record.rows[i].n);
    mc[i] = sum_c / k;
    mo[i] = sum_o / k;
    sc[i] = std::sqrt(std::max(0.0, (sq_c - k * mc[i] * mc[i]) / (k - 1.0)));
    so[i] = std::sqrt(std::max(0.0, (sq_o - k * mo[i] * mo[i]) / (k - 1.0)));
  }
  auto nulls = [](const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(finite_or_null(x));
    return a;
  };
  agg["schema"] = "psg-aggregate";
  agg["runs"] = runs.size();
  agg["n"] = n;
  agg["err_control_mean"] = nulls(mc);
  agg["err_control_std"] = nulls(sc);
  agg["err_obj_mean"] = nulls(mo);
  agg["err_obj_std"] = nulls(so);
  agg["final_err_control_mean"] = rows ? finite_or_null(mc.back()) : json(nullptr);
  double final_iterate_mean = 0.0;
  for (const auto& r : runs) final_iterate_mean += r.summary["final"]["final_iterate_err"].get<double>() / k;
  agg["final_iterate_err_mean"] = final_iterate_mean;

  json env{{"available", false}};
  if (prep.lemma && !runs.front().record.tracks_average) {
    std::int64_t crossings = 0;
    json first = nullptr;
    double max_ratio = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double bound = analysis::iterate_envelope(*prep.lemma, static_cast<std::int64_t>(n[i]));
      max_ratio = std::max(max_ratio, mc[i] / bound);
      // The bound is attained at n = 1 by construction; allow rounding there.
      if (mc[i] > bound * (1.0 + 1e-9)) {
        ++crossings;
        if (first.is_null()) first = n[i];
      }
    }
    env = json{{"available", true},
               {"applies", prep.envelope.value("applies", false)},
               {"K", prep.lemma->K},
               {"nu", prep.lemma->nu},
               {"crossings", crossings},
               {"first_crossing", first},
               {"max_ratio", max_ratio},
               {"dominated", crossings == 0}};
  }
  agg["envelope"] = env;
  return agg;
}

namespace {

std::vector<RunOutcome> run_many(const PreparedExperiment& prep, const std::vector<std::uint64_t>& seeds,
                                 bool with_bias, unsigned threads, json& failures) {
  std::vector<std::optional<RunOutcome>> slots(seeds.size());
  std::vector<std::string> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        slots[i] = run_prepared(prep, seeds[i], with_bias);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(seeds.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<RunOutcome> out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (slots[i]) {
      out.push_back(std::move(*slots[i]));
    } else {
      failures.push_back({{"seed", seeds[i]}, {"bias_applied", with_bias}, {"error", errors[i]}});
    }
  }
  return out;
}

}  // namespace

ReplicateOutcome cmd_replicate(const ExperimentConfig& config, int k, bool write, unsigned threads) {
  const PreparedExperiment prep = prepare(config);
  const auto seeds = replicate_seeds(config, k);
  ReplicateOutcome out;
  json failures = json::array();
  out.runs = run_many(prep, seeds, true, threads, failures);
  if (config.bias) out.unbiased = run_many(prep, seeds, false, threads, failures);

  out.aggregate = aggregate_runs(prep, out.runs);
  out.aggregate["seeds"] = seeds;
  out.aggregate["requested"] = seeds.size();
  out.aggregate["failures"] = failures;
  out.aggregate["partial"] = !failures.empty();
  if (config.bias && !out.runs.empty() && !out.unbiased.empty()) {
    const json unbiased = aggregate_runs(prep, out.unbiased);
    const double b = out.aggregate["final_err_control_mean"].get<double>();
    const double u = unbiased["final_err_control_mean"].get<double>();
    out.aggregate["bias"] = {{"magnitude", config.bias->magnitude},
                             {"exponent", config.bias->exponent},
                             {"biased_final_mean", b},
                             {"unbiased_final_mean", u},
                             {"ratio", b / u}};
  }
  if (write) {
    const std::filesystem::path dir = config.output_dir;
    // Seeds may repeat in seed_list, so directories carry the run index too.
    auto name = [](std::size_t i, std::uint64_t seed) {
      return "run_" + std::to_string(i) + "_seed_" + std::to_string(seed);
    };
    for (std::size_t i = 0; i < out.runs.size(); ++i) write_run(prep, out.runs[i], dir / name(i, out.runs[i].seed));
    for (std::size_t i = 0; i < out.unbiased.size(); ++i) {
      write_json(dir / "unbiased" / name(i, out.unbiased[i].seed) / "summary.json", out.unbiased[i].summary);
    }
    write_json(dir / "aggregate.json", out.aggregate);
  }
  return out;
}

}  // namespace psg::app
