#pragma once

#include <memory>
#include <string>

#include "psg/heat/heat_model.hpp"

namespace psg::heat {

enum class CaseKind { strongly_convex, convex };

CaseKind parse_case_kind(const std::string& name);
std::string to_string(CaseKind kind);

struct AnalyticParams {
  double lambda = 2.0;
  double a_bar = 2.0;
  double box_lower = -1.0;
  double box_upper = 1.0;
  random::TruncatedNormalSpec field;
};

/// Problem data with a closed-form optimal control for the deterministic
/// problem at a = a_bar.
///
/// strongly_convex: y_D = -(a 8 pi^2 + 1/(a 8 pi^2 lambda)) sin(2 pi x) sin(2 pi y),
///   u_bar = clamp(-sin(2 pi x) sin(2 pi y) / lambda); requires lambda > 0.
/// convex: lambda = 0, y_D = s1 + 2 s2, e_D = 2 pi^2 a s1 - u_bar with
///   s1 = sin(pi x) sin(pi y), s2 = sin(2 pi x) sin(2 pi y), and the bang-bang
///   control u_bar = u_b where s2 > 0, u_a where s2 < 0, the box midpoint on
///   the nodal lines.
struct AnalyticCase {
  CaseKind kind;
  std::shared_ptr<const HeatModelConfig> config;
  GridFunction u_bar;
  GridFunction initial;  // default starting control
};

AnalyticCase analytic_case(CaseKind kind, std::shared_ptr<const fem::FunctionSpace> space,
                           const AnalyticParams& params);

}  // namespace psg::heat
