#include "psg/analysis/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace psg::analysis {

RecursionParams lemma_constants(double c1, double c2, double c3, double e1) {
  if (!(c1 > 1.0)) throw std::invalid_argument("lemma constants: c1 must exceed 1");
  if (!(c2 >= 0.0) || !(c3 >= 0.0)) {
    throw std::invalid_argument("lemma constants: c2 and c3 must be nonnegative");
  }
  if (!(e1 > 0.0)) throw std::invalid_argument("lemma constants: e1 must be positive");
  RecursionParams p{c1, c2, c3, e1, 0.0, 0.0};
  p.K = (c3 + e1 * c2) / (c1 - 1.0);
  p.nu = p.K / e1 - 1.0;
  return p;
}

bool is_admissible(const RecursionParams& p) {
  if (!(p.nu > -1.0) || !std::isfinite(p.K)) return false;
  // f(x) = 1 - c1 x + c2 x^2 on x = 1/m in (0, 1/(1+nu)].
  const double x_max = 1.0 / (1.0 + p.nu);
  double x = x_max;
  if (p.c2 > 0.0) x = std::clamp(p.c1 / (2.0 * p.c2), 0.0, x_max);
  return 1.0 - p.c1 * x + p.c2 * x * x >= 0.0;
}

RecursionCheck check_recursion(const RecursionParams& p, std::int64_t horizon, double rel_tol) {
  if (horizon < 1) throw std::invalid_argument("recursion check: horizon must be >= 1");
  RecursionCheck out;
  out.horizon = horizon;
  double e = p.e1;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double m = static_cast<double>(n) + p.nu;
    const double bound = p.K / m;
    out.max_ratio = std::max(out.max_ratio, e / bound);
    if (e > bound * (1.0 + rel_tol)) {
      ++out.violations;
      if (out.first_violation == 0) out.first_violation = n;
    }
    e = e * (1.0 - p.c1 / m + p.c2 / (m * m)) + p.c3 / (m * m);
  }
  return out;
}

LemmaStudy lemma_study(int trials, std::int64_t horizon, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("lemma study: trials must be >= 1");
  LemmaStudy out;
  out.trials = trials;
  out.horizon = horizon;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    RecursionParams p;
    do {
      const double c1 = 1.0 + 4.0 * (1.0 - u01(rng));
      const double c2 = 4.0 * u01(rng);
      const double c3 = 4.0 * u01(rng);
      const double e1 = 0.01 + 4.99 * u01(rng);
      p = lemma_constants(c1, c2, c3, e1);
    } while (!is_admissible(p));
    const RecursionCheck c = check_recursion(p, horizon);
    out.violations += c.violations;
    if (c.violations > 0) ++out.failing_trials;
    out.max_ratio = std::max(out.max_ratio, c.max_ratio);
  }
  return out;
}

}  // namespace psg::analysis
