#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "json.hpp"

namespace psg::app {

struct MmsLevel {
  int n_div = 0;
  double h = 0.0;
  double l2_error = 0.0;
  int cg_iterations = 0;
};

struct MmsStudy {
  std::vector<MmsLevel> levels;
  double slope = 0.0;  // of log error against log n_div
  double r2 = 0.0;
};

/// State problem with a = a_bar and u = -1/2 sin(2 pi x) sin(2 pi y), whose exact
/// solution is -1/(16 pi^2 a_bar) sin(2 pi x) sin(2 pi y).
MmsStudy mms_study(const std::vector<int>& levels, double a_bar = 2.0);
nlohmann::json to_json(const MmsStudy& study);

nlohmann::json lemma_study_json(int trials, std::int64_t horizon, std::uint64_t seed);

/// Write mms.json / lemma.json into `dir` and return the document.
nlohmann::json cmd_mms(const std::vector<int>& levels, const std::filesystem::path& dir);
nlohmann::json cmd_lemma(int trials, std::int64_t horizon, std::uint64_t seed, const std::filesystem::path& dir);

}  // namespace psg::app
