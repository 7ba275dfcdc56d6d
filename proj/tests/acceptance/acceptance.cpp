// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "psg/analysis/model_constants.hpp"
#include "psg/analysis/rate_fit.hpp"
#include "psg/analysis/recursion.hpp"
#include "psg/app/config.hpp"
#include "psg/app/experiment.hpp"
#include "psg/app/studies.hpp"
#include "psg/core/averaging.hpp"
#include "psg/heat/oracle.hpp"

using namespace psg;
using nlohmann::json;

namespace {

// Pinned tolerances.
constexpr double kObjSlopeLo = -1.35, kObjSlopeHi = -0.70;
constexpr double kIterSlopeMax = -0.45;
constexpr double kAvgSlopeLo = -0.85, kAvgSlopeHi = -0.35;
constexpr double kGradBound = 3.9;
constexpr double kMmsSlope = -2.0, kMmsTol = 0.3;
constexpr double kFdRelTol = 1e-4, kFdStep = 1e-4;
constexpr int kFdTriples = 20;
constexpr int kLemmaTrials = 100;
constexpr std::int64_t kLemmaHorizon = 100000;
constexpr double kLemmaSeconds = 30.0;
constexpr int kEnvelopeSeeds = 20;
constexpr int kBiasSeeds = 20;
constexpr double kBiasRatio = 2.0;
constexpr double kRun1Seconds = 300.0, kRun3Seconds = 600.0;
constexpr double kFitLo = 10.0, kFitHi = 1000.0;

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

analysis::RateFit fit_column(const RunRecord& rec, double RunRow::*column) {
  std::vector<double> n, e;
  for (const auto& r : rec.rows) {
    n.push_back(static_cast<double>(r.n));
    e.push_back(r.*column);
  }
  return analysis::fit_rate(n, e, kFitLo, kFitHi);
}

app::ExperimentConfig config(const json& j) { return app::parse_config(j); }

// Records every iterate handed to the oracle so feasibility can be checked.
class RecordingOracle : public GradientOracle {
 public:
  RecordingOracle(const GradientOracle& inner, std::function<void(const Vector&, std::int64_t)> check)
      : inner_(inner), check_(std::move(check)) {}
  OracleSample sample(const Vector& u, SampleIndex index) const override {
    check_(u, index.n);
    return inner_.sample(u, index);
  }

 private:
  const GradientOracle& inner_;
  std::function<void(const Vector&, std::int64_t)> check_;
};

void criteria_1_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto prep = app::prepare(config({{"experiment", "strongly_convex"}, {"field", {{"master_seed", 7}}}}));
  const auto out = app::run_prepared(prep, 7);
  const double secs = seconds_since(t0);
  const auto obj = fit_column(out.record, &RunRow::err_obj);
  report(1, obj.slope >= kObjSlopeLo && obj.slope <= kObjSlopeHi && secs <= kRun1Seconds,
         fmt("strongly convex objective-error slope %.3f in [%.2f, %.2f] (%zu points, %zu nonpositive excluded), %.1f s",
             obj.slope, kObjSlopeLo, kObjSlopeHi, obj.points, obj.excluded, secs));
  const auto it = fit_column(out.record, &RunRow::err_control);
  report(2, it.slope <= kIterSlopeMax, fmt("strongly convex iterate-error slope %.3f <= %.2f", it.slope, kIterSlopeMax));
}

void criteria_3_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto prep = app::prepare(config({{"experiment", "convex"}, {"field", {{"master_seed", 7}}}}));
  const auto out = app::run_prepared(prep, 7);
  const double secs = seconds_since(t0);
  const auto avg = fit_column(out.record, &RunRow::err_obj);
  report(3, out.record.tracks_average && avg.slope >= kAvgSlopeLo && avg.slope <= kAvgSlopeHi && secs <= kRun3Seconds,
         fmt("convex averaged objective-error slope %.3f in [%.2f, %.2f], %.1f s", avg.slope, kAvgSlopeLo, kAvgSlopeHi,
             secs));
  double max_norm = 0.0;
  int violations = 0;
  for (const auto& r : out.record.rows) {
    max_norm = std::max(max_norm, r.grad_norm);
    if (r.grad_norm > kGradBound) ++violations;
  }
  report(4, violations == 0,
         fmt("convex gradient norms: max %.4f, %d of %zu above %.1f", max_norm, violations, out.record.rows.size(),
             kGradBound));
}

void criterion_5() {
  const auto s = app::mms_study({8, 16, 32, 64});
  report(5, std::abs(s.slope - kMmsSlope) <= kMmsTol,
         fmt("state L2-error order over n_div 8..64: slope %.3f within %.1f of %.1f", s.slope, kMmsTol, kMmsSlope));
}

void criterion_6() {
  auto space = fem::FunctionSpace::create(32);
  const auto sc = heat::analytic_case(heat::CaseKind::strongly_convex, space, {});
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < kFdTriples; ++k) {
    Eigen::VectorXd u(space->dimension()), d(space->dimension());
    for (auto& v : u) v = 1.5 * c(rng);
    for (auto& v : d) v = c(rng);
    const fem::GridFunction uf(space->mesh(), u);
    const auto draw = random::draw(sc.config->field, 99, static_cast<std::uint64_t>(k + 1));
    const auto a = heat::conductivity(*sc.config, draw.value);
    const auto s = heat::stochastic_gradient(*sc.config, uf, draw);
    const double exact = space->l2_inner(s.g.values(), d);
    const double fd = (heat::sample_objective(*sc.config, uf.with_values(u + kFdStep * d), a) -
                       heat::sample_objective(*sc.config, uf.with_values(u - kFdStep * d), a)) /
                      (2 * kFdStep);
    worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
  }
  report(6, worst <= kFdRelTol,
         fmt("gradient vs central differences (t=%.0e, %d triples): worst relative error %.2e <= %.0e", kFdStep,
             kFdTriples, worst, kFdRelTol));
}

void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = analysis::lemma_study(kLemmaTrials, kLemmaHorizon, 1);
  const double secs = seconds_since(t0);
  report(7, s.violations == 0 && secs <= kLemmaSeconds,
         fmt("recursion oracle: %lld violations over %d tuples x %lld steps, max ratio %.15f, %.2f s",
             static_cast<long long>(s.violations), s.trials, static_cast<long long>(s.horizon), s.max_ratio, secs));
}

void criterion_8() {
  const auto cfg = config({{"experiment", "strongly_convex"}, {"step_rule", {{"nu", "lemma"}}}});
  const auto out = app::cmd_replicate(cfg, kEnvelopeSeeds, false);
  const auto& env = out.aggregate["envelope"];
  const bool ok = !out.aggregate["partial"].get<bool>() && env["available"].get<bool>() &&
                  env["applies"].get<bool>() && env["crossings"].get<std::int64_t>() == 0;
  report(8, ok,
         fmt("%d-seed mean iterate error under sqrt(K/(n+nu)) with K=%.2f, nu=%.2f: %lld crossings, max ratio %.6f",
             kEnvelopeSeeds, env["K"].get<double>(), env["nu"].get<double>(),
             static_cast<long long>(env["crossings"].get<std::int64_t>()), env["max_ratio"].get<double>()));
}

void criterion_9() {
  auto cfg = config({{"experiment", "strongly_convex"}, {"bias", {{"magnitude", 1.0}, {"exponent", 2.0}}}});
  const auto out = app::cmd_replicate(cfg, kBiasSeeds, false);
  const auto& b = out.aggregate["bias"];
  const double ratio = b["ratio"].get<double>();
  bool rejected = false;
  try {
    auto bad = config({{"experiment", "strongly_convex"}, {"iterations", 10}, {"bias", {{"magnitude", 1.0}, {"exponent", 0.0}}}});
    app::run_prepared(app::prepare(bad), 7);
  } catch (const app::ConfigError&) {
    rejected = true;
  }
  report(9, ratio <= kBiasRatio && rejected && !out.aggregate["partial"].get<bool>(),
         fmt("bias K_n = n^-2: final mean error %.5f vs unbiased %.5f (ratio %.3f <= %.1f); constant bias %s",
             b["biased_final_mean"].get<double>(), b["unbiased_final_mean"].get<double>(), ratio, kBiasRatio,
             rejected ? "rejected" : "accepted"));
}

void criterion_10() {
  std::vector<std::string> problems;
  auto space = fem::FunctionSpace::create(32);
  const auto sc = heat::analytic_case(heat::CaseKind::strongly_convex, space, {});
  heat::AnalyticParams cp;
  cp.lambda = 0.0;
  const auto cv = heat::analytic_case(heat::CaseKind::convex, space, cp);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> c(-3.0, 3.0);

  // Projection: idempotent and nonexpansive on 100 random pairs.
  int proj_bad = 0;
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd a(space->dimension()), b(space->dimension());
    for (auto& v : a) v = c(rng);
    for (auto& v : b) v = c(rng);
    const auto pa = heat::project_box(fem::GridFunction(space->mesh(), a), sc.config->box);
    const auto pb = heat::project_box(fem::GridFunction(space->mesh(), b), sc.config->box);
    if (heat::project_box(pa, sc.config->box).values() != pa.values()) ++proj_bad;
    if (space->l2_norm(Eigen::VectorXd(pa.values() - pb.values())) > space->l2_norm(Eigen::VectorXd(a - b))) ++proj_bad;
  }
  if (proj_bad) problems.push_back(fmt("projection %d", proj_bad));

  // Feasibility of every projected iterate u_{n+1}, both experiments. The start u_1 may lie outside the box.
  int infeasible = 0;
  for (const auto* problem : {&sc, &cv}) {
    heat::HeatOracle inner(problem->config);
    RecordingOracle oracle(inner, [&](const Vector& u, std::int64_t n) {
      if (n > 1 && !problem->config->box.contains(fem::GridFunction(space->mesh(), u))) ++infeasible;
    });
    PsgConfig run;
    run.max_iterations = 300;
    run.rule = problem == &sc ? StepSizeRule(PolyDecayStep{1.0 / 3.0, 0.0}) : StepSizeRule(SqrtDecayStep{500.0, 1.0, 3.9});
    run.master_seed = 3;
    run.initial = problem->initial.values();
    const auto rec = run_psg(oracle, heat::box_projection(problem->config), run, heat::mass_inner(problem->config));
    if (!problem->config->box.contains(fem::GridFunction(space->mesh(), rec.final_iterate))) ++infeasible;
  }
  if (infeasible) problems.push_back(fmt("infeasible iterates %d", infeasible));

  // A-priori bounds on 50 random inputs.
  const auto mc = analysis::model_constants(0.5, std::numbers::sqrt2);
  std::uniform_real_distribution<double> ad(0.5, 3.5);
  int bound_bad = 0;
  for (int k = 0; k < 50; ++k) {
    const auto& model = k % 2 ? *cv.config : *sc.config;
    Eigen::VectorXd u(space->dimension()), a(static_cast<Eigen::Index>(space->mesh().num_triangles()));
    for (auto& v : u) v = c(rng);
    for (auto& v : a) v = ad(rng);
    const fem::ElementField field(space->mesh(), a);
    const auto y = heat::solve_state(model, fem::GridFunction(space->mesh(), u), field);
    Eigen::VectorXd source = u;
    if (model.extra_source) source += model.extra_source->values();
    if (space->l2_norm(y) > mc.C1 * space->l2_norm(source)) ++bound_bad;
    const auto p = heat::solve_adjoint(model, y, field);
    if (space->l2_norm(p) > mc.C2 * space->l2_norm(Eigen::VectorXd(model.target.values() - y.values()))) ++bound_bad;
  }
  if (bound_bad) problems.push_back(fmt("a-priori bounds %d", bound_bad));

  // Determinism: identical configs give bitwise-identical records.
  const auto prep = app::prepare(config({{"experiment", "strongly_convex"}, {"iterations", 100}}));
  const auto r1 = app::run_prepared(prep, 21);
  const auto r2 = app::run_prepared(prep, 21);
  bool same = r1.record.final_iterate == r2.record.final_iterate && r1.summary == r2.summary;
  for (std::size_t i = 0; same && i < r1.record.rows.size(); ++i) {
    const auto &a = r1.record.rows[i], &b = r2.record.rows[i];
    same = a.tau == b.tau && a.draw_value == b.draw_value && a.j_hat == b.j_hat &&
           std::memcmp(&a.err_obj, &b.err_obj, sizeof(double)) == 0 && a.err_control == b.err_control;
  }
  if (!same) problems.push_back("determinism");

  // Averaging weights.
  double worst_sum = 0.0;
  for (const StepSizeRule& rule : {StepSizeRule(ConstantStep{0.1}), StepSizeRule(PolyDecayStep{1.0 / 3.0, 0.0}),
                                   StepSizeRule(SqrtDecayStep{500.0, 1.0, 3.9}), StepSizeRule(PowerDecayStep{1.0, 0.75}),
                                   StepSizeRule(FixedHorizonStep{1.0, 3.9, 1000})}) {
    for (std::int64_t i : {1, 10, 500, 1000}) {
      double s = 0.0;
      for (double w : averaging_weights(rule, i, 1000)) s += w;
      worst_sum = std::max(worst_sum, std::abs(s - 1.0));
    }
  }
  if (worst_sum > 1e-12) problems.push_back(fmt("averaging weights off by %.1e", worst_sum));

  // Truncated-normal sample statistics.
  const random::TruncatedNormalSpec spec;
  double sum = 0.0;
  int outside = 0;
  for (std::uint64_t i = 1; i <= 100000; ++i) {
    const double v = random::draw(spec, 123, i).value;
    if (!(v > spec.lower && v < spec.upper)) ++outside;
    sum += v;
  }
  const double mean = sum / 100000;
  if (std::abs(mean - 2.0) > 0.005 || outside) problems.push_back(fmt("field mean %.5f, %d outside", mean, outside));

  std::string detail = "projection, feasibility, a-priori bounds, determinism, averaging weights, field statistics";
  if (!problems.empty()) {
    detail += "; failed:";
    for (const auto& p : problems) detail += " " + p + ";";
  } else {
    detail += fmt(" (field mean %.5f, weight-sum error %.1e)", mean, worst_sum);
  }
  report(10, problems.empty(), detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::function<void()>> steps{criteria_1_2, criteria_3_4, criterion_5, criterion_6,
                                                  criterion_7,  criterion_8,  criterion_9, criterion_10};
  for (const auto& step : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      std::printf("FAIL error: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("acceptance: %d failure(s), %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
