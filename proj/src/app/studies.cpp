#include "psg/app/studies.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "psg/analysis/rate_fit.hpp"
#include "psg/analysis/recursion.hpp"
#include "psg/app/artifacts.hpp"
#include "psg/fem/function_space.hpp"

namespace psg::app {

using nlohmann::json;

MmsStudy mms_study(const std::vector<int>& levels, double a_bar) {
  if (levels.size() < 2) throw std::invalid_argument("mms: need at least two levels");
  constexpr double pi = std::numbers::pi;
  auto s2 = [](double x, double y) { return std::sin(2 * pi * x) * std::sin(2 * pi * y); };
  const double amplitude = -1.0 / (16 * pi * pi * a_bar);

  MmsStudy study;
  std::vector<double> n, err;
  for (int level : levels) {
    const fem::FunctionSpace space(fem::build_mesh(level));
    const auto u = space.interpolate([&](double x, double y) { return -0.5 * s2(x, y); });
    const auto K = space.unit_stiffness().scaled(a_bar);
    fem::CgReport report;
    const auto y = fem::solve_dirichlet(K, space.load(u), space.mesh(), {}, &report);
    MmsLevel l;
    l.n_div = level;
    l.h = 1.0 / level;
    l.l2_error = space.l2_error(y, [&](double x, double yy) { return amplitude * s2(x, yy); });
    l.cg_iterations = report.iterations;
    study.levels.push_back(l);
    n.push_back(level);
    err.push_back(l.l2_error);
  }
  const auto fit = analysis::fit_rate(n, err, n.front(), n.back(), 2);
  study.slope = fit.slope;
  study.r2 = fit.r2;
  return study;
}

json to_json(const MmsStudy& study) {
  json levels = json::array();
  for (const auto& l : study.levels) {
    levels.push_back({{"n_div", l.n_div}, {"h", l.h}, {"l2_error", l.l2_error}, {"cg_iterations", l.cg_iterations}});
  }
  return json{{"levels", levels}, {"slope", study.slope}, {"r2", study.r2}};
}

json lemma_study_json(int trials, std::int64_t horizon, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = analysis::lemma_study(trials, horizon, seed);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return json{{"trials", s.trials},          {"horizon", s.horizon},
              {"seed", seed},                {"violations", s.violations},
              {"failing_trials", s.failing_trials}, {"max_ratio", s.max_ratio},
              {"runtime_s", seconds}};
}

json cmd_mms(const std::vector<int>& levels, const std::filesystem::path& dir) {
  json j = to_json(mms_study(levels));
  write_json(dir / "mms.json", j);
  return j;
}

json cmd_lemma(int trials, std::int64_t horizon, std::uint64_t seed, const std::filesystem::path& dir) {
  json j = lemma_study_json(trials, horizon, seed);
  write_json(dir / "lemma.json", j);
  return j;
}

}  // namespace psg::app
