#pragma once

#include <cstdint>

namespace psg::analysis {

/// Constants of the recursion e_{n+1} <= e_n (1 - c1/m + c2/m^2) + c3/m^2 with m = n + nu.
/// K = (c3 + e1 c2) / (c1 - 1) and nu = K / e1 - 1, so e_n <= K / (n + nu).
struct RecursionParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double e1 = 0.0;
  double K = 0.0;
  double nu = 0.0;
};

/// Throws std::invalid_argument when c1 <= 1, any constant is negative or e1 <= 0.
RecursionParams lemma_constants(double c1, double c2, double c3, double e1);

/// The bound needs the contraction factor 1 - c1/m + c2/m^2 to stay nonnegative
/// for every m >= 1 + nu; otherwise the recursion can overshoot and change sign.
bool is_admissible(const RecursionParams& p);

struct RecursionCheck {
  std::int64_t horizon = 0;
  std::int64_t violations = 0;
  std::int64_t first_violation = 0;  // 0 when none
  double max_ratio = 0.0;            // max_n e_n (n + nu) / K
};

/// Iterates the recursion with equality from e_1 and compares against K/(n+nu)
/// for n = 1..horizon. A relative slack of `rel_tol` absorbs rounding at n = 1,
/// where the bound is attained exactly.
RecursionCheck check_recursion(const RecursionParams& p, std::int64_t horizon, double rel_tol = 1e-12);

struct LemmaStudy {
  int trials = 0;
  std::int64_t horizon = 0;
  std::int64_t violations = 0;
  int failing_trials = 0;
  double max_ratio = 0.0;
};

/// Random admissible tuples c1 in (1, 5], c2, c3 in [0, 4], e1 in [0.01, 5].
LemmaStudy lemma_study(int trials, std::int64_t horizon, std::uint64_t seed);

}  // namespace psg::analysis
