#include "psg/analysis/model_constants.hpp"

#include <numbers>
#include <stdexcept>

namespace psg::analysis {

ModelConstants model_constants(double a_min, double domain_diameter) {
  if (!(a_min > 0.0)) throw std::invalid_argument("model constants: a_min must be positive");
  if (!(domain_diameter > 0.0)) throw std::invalid_argument("model constants: diameter must be positive");
  ModelConstants c;
  c.poincare = domain_diameter / std::numbers::pi;
  c.C1 = c.poincare * c.poincare / a_min;
  c.C2 = c.C1;
  return c;
}

double gradient_bound(const ModelConstants& c, double lambda, double target_norm, double extra_norm,
                      double control_norm) {
  return lambda * control_norm + c.C2 * (target_norm + c.C1 * (control_norm + extra_norm));
}

GrowthConstants growth_constants(const ModelConstants& c, double lambda, double target_norm,
                                 double extra_norm) {
  const double A = c.C2 * target_norm + c.C2 * c.C1 * extra_norm;
  const double B = lambda + c.C1 * c.C2;
  return GrowthConstants{2.0 * A * A, 2.0 * B * B};
}

}  // namespace psg::analysis
