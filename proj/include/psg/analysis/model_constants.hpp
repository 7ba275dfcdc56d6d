#pragma once

namespace psg::analysis {

struct ModelConstants {
  double poincare = 0.0;  // C_p <= diam / pi
  double C1 = 0.0;        // ||y|| <= C1 ||source||
  double C2 = 0.0;        // ||p|| <= C2 ||y_D - y||
};

/// C_p = diameter / pi, C1 = C2 = C_p^2 / a_min.
ModelConstants model_constants(double a_min, double domain_diameter);

/// lambda ||u|| + C2 (||y_D|| + C1 (||u|| + ||e_D||)), a uniform bound on ||G(u, omega)||
/// for ||u|| <= control_norm.
double gradient_bound(const ModelConstants& c, double lambda, double target_norm, double extra_norm,
                      double control_norm);

/// M1, M2 with ||G(u)||^2 <= M1 + M2 ||u||^2, from ||G|| <= A + B ||u||.
struct GrowthConstants {
  double M1 = 0.0;
  double M2 = 0.0;
};

GrowthConstants growth_constants(const ModelConstants& c, double lambda, double target_norm,
                                 double extra_norm);

}  // namespace psg::analysis
