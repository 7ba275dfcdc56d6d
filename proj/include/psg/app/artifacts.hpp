#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "psg/core/run.hpp"
#include "psg/fem/mesh.hpp"

namespace psg::app {

/// Fixed trajectory.csv header, in column order.
inline constexpr const char* kTrajectoryColumns = "n,tau,a_sample,j_hat,j_hat_avg_m,err_control,err_obj,wall_ms";

/// Doubles with 17 significant digits; NaN as "nan".
std::string format_double(double v);

void write_trajectory_csv(const std::filesystem::path& path, const RunRecord& record);
void write_control_csv(const std::filesystem::path& path, const fem::Mesh& mesh, const Vector& u);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Structural check of summary.json; returns one message per problem.
std::vector<std::string> validate_summary(const nlohmann::json& summary);

/// NaN and infinities become null.
nlohmann::json finite_or_null(double v);

}  // namespace psg::app
