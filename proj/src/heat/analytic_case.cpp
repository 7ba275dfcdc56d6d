#include "psg/heat/analytic_case.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psg::heat {

namespace {

constexpr double kPi = std::numbers::pi;

double s1(double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); }
double s2(double x, double y) { return std::sin(2 * kPi * x) * std::sin(2 * kPi * y); }

// Sign of s2 with the nodal lines x, y in {0, 1/2, 1} mapped to 0 exactly;
// floating-point sin(pi) is not zero.
int sign_s2(double x, double y) {
  const double v = s2(x, y);
  if (std::abs(v) < 1e-12) return 0;
  return v > 0 ? 1 : -1;
}

}  // namespace

CaseKind parse_case_kind(const std::string& name) {
  if (name == "strongly_convex") return CaseKind::strongly_convex;
  if (name == "convex") return CaseKind::convex;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::string to_string(CaseKind kind) {
  return kind == CaseKind::strongly_convex ? "strongly_convex" : "convex";
}

AnalyticCase analytic_case(CaseKind kind, std::shared_ptr<const fem::FunctionSpace> space,
                           const AnalyticParams& params) {
  if (!space) throw std::invalid_argument("analytic case: missing function space");
  if (!(params.a_bar > 0.0)) throw std::invalid_argument("analytic case: a_bar must be positive");
  if (!(params.box_lower < params.box_upper)) {
    throw std::invalid_argument("analytic case: empty box");
  }
  const double lo = params.box_lower;
  const double hi = params.box_upper;
  const double a = params.a_bar;

  auto config = std::make_shared<HeatModelConfig>();
  config->space = space;
  config->lambda = params.lambda;
  config->field = params.field;
  config->box = BoxConstraint::constant(space->mesh(), lo, hi);

  GridFunction u_bar;
  GridFunction initial;
  if (kind == CaseKind::strongly_convex) {
    if (!(params.lambda > 0.0)) {
      throw std::invalid_argument("strongly convex case requires lambda > 0");
    }
    const double lambda = params.lambda;
    const double c = a * 8 * kPi * kPi + 1.0 / (a * 8 * kPi * kPi * lambda);
    config->target = space->interpolate([c](double x, double y) { return -c * s2(x, y); });
    u_bar = space->interpolate(
        [=](double x, double y) { return std::clamp(-s2(x, y) / lambda, lo, hi); });
    initial = space->interpolate([](double x, double y) { return 1.5 * s1(x, y); });
  } else {
    if (params.lambda != 0.0) throw std::invalid_argument("convex case requires lambda = 0");
    const double mid = 0.5 * (lo + hi);
    auto bang = [=](double x, double y) {
      const int s = sign_s2(x, y);
      return s > 0 ? hi : (s < 0 ? lo : mid);
    };
    config->target = space->interpolate([](double x, double y) { return s1(x, y) + 2 * s2(x, y); });
    config->extra_source = space->interpolate(
        [=](double x, double y) { return 2 * kPi * kPi * a * s1(x, y) - bang(x, y); });
    u_bar = space->interpolate(bang);
    initial = space->zeros();
  }
  config->validate();
  return AnalyticCase{kind, std::move(config), std::move(u_bar), std::move(initial)};
}

}  // namespace psg::heat
