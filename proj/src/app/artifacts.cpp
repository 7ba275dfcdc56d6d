#include "psg/app/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace psg::app {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const RunRecord& record) {
  auto out = open_out(path);
  out << kTrajectoryColumns << '\n';
  for (const RunRow& r : record.rows) {
    out << r.n << ',' << format_double(r.tau) << ',' << format_double(r.draw_value) << ','
        << format_double(r.j_hat) << ',' << format_double(r.j_hat_avg_m) << ','
        << format_double(r.err_control) << ',' << format_double(r.err_obj) << ','
        << format_double(r.wall_ms) << '\n';
  }
}

void write_control_csv(const std::filesystem::path& path, const fem::Mesh& mesh, const Vector& u) {
  if (static_cast<std::size_t>(u.size()) != mesh.num_nodes()) {
    throw std::invalid_argument("control csv: size mismatch");
  }
  auto out = open_out(path);
  out << "x,y,u\n";
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const auto& p = mesh.node(i);
    out << format_double(p.x) << ',' << format_double(p.y) << ','
        << format_double(u[static_cast<Eigen::Index>(i)]) << '\n';
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  return json::parse(in);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> validate_summary(const json& s) {
  std::vector<std::string> problems;
  auto need = [&](const json& obj, const std::string& key, json::value_t type, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
      problems.push_back(where + key + ": missing");
      return false;
    }
    const auto t = obj.at(key).type();
    const bool number_ok = type == json::value_t::number_float &&
                           (t == json::value_t::number_integer || t == json::value_t::number_unsigned ||
                            t == json::value_t::null);
    const bool int_ok = type == json::value_t::number_integer && t == json::value_t::number_unsigned;
    if (t != type && !number_ok && !int_ok) {
      problems.push_back(where + key + ": wrong type");
      return false;
    }
    return true;
  };
  using V = json::value_t;
  need(s, "schema", V::string, "");
  if (s.contains("schema") && s["schema"] != "psg-summary") problems.push_back("schema: unexpected value");
  need(s, "schema_version", V::number_integer, "");
  need(s, "code_version", V::string, "");
  need(s, "experiment", V::string, "");
  need(s, "seed", V::number_integer, "");
  need(s, "config", V::object, "");
  if (need(s, "final", V::object, "")) {
    need(s["final"], "err_control", V::number_float, "final.");
    need(s["final"], "err_obj", V::number_float, "final.");
    need(s["final"], "final_iterate_err", V::number_float, "final.");
  }
  if (need(s, "fits", V::object, "")) {
    for (const char* k : {"err_obj", "err_control"}) {
      if (!s["fits"].contains(k)) {
        problems.push_back(std::string("fits.") + k + ": missing");
      } else if (!s["fits"][k].is_null()) {
        for (const char* f : {"slope", "intercept", "r2", "n_lo", "n_hi"}) {
          need(s["fits"][k], f, V::number_float, std::string("fits.") + k + ".");
        }
      }
    }
  }
  if (need(s, "gradient", V::object, "")) {
    need(s["gradient"], "max_norm", V::number_float, "gradient.");
    need(s["gradient"], "bound", V::number_float, "gradient.");
    need(s["gradient"], "violations", V::number_integer, "gradient.");
  }
  if (need(s, "envelope", V::object, "")) need(s["envelope"], "available", V::boolean, "envelope.");
  if (need(s, "step_rule", V::object, "")) {
    need(s["step_rule"], "name", V::string, "step_rule.");
    need(s["step_rule"], "robbins_monro", V::boolean, "step_rule.");
  }
  if (need(s, "reference", V::object, "")) need(s["reference"], "kind", V::string, "reference.");
  return problems;
}

}  // namespace psg::app
