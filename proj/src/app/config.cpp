#include "psg/app/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

namespace psg::app {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::strongly_convex: return "strongly_convex";
    case ExperimentKind::convex: return "convex";
    case ExperimentKind::fem_mms: return "fem_mms";
    case ExperimentKind::lemma_oracle: return "lemma_oracle";
  }
  return "unknown";
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

std::int64_t integer(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return j.at(key).get<std::int64_t>();
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "strongly_convex") return ExperimentKind::strongly_convex;
  if (s == "convex") return ExperimentKind::convex;
  if (s == "fem_mms") return ExperimentKind::fem_mms;
  if (s == "lemma_oracle") return ExperimentKind::lemma_oracle;
  throw ConfigError("experiment: unknown kind '" + s + "'");
}

StepRuleSpec default_rule(ExperimentKind kind) {
  StepRuleSpec r;
  if (kind == ExperimentKind::convex) {
    r.kind = "sqrt";
    r.theta = 500.0;
    r.diameter = 1.0;
    r.sqrt_m = 3.9;
  } else {
    r.kind = "poly";
    r.theta = 1.0 / 3.0;
    r.nu = 0.0;
  }
  return r;
}

StepRuleSpec parse_rule(const json& j, ExperimentKind experiment) {
  const std::string where = "step_rule";
  reject_unknown(j, {"kind", "tau", "theta", "nu", "diameter", "sqrt_m", "horizon", "gamma"}, where);
  StepRuleSpec r = default_rule(experiment);
  if (j.contains("kind")) {
    const auto kind = get<std::string>(j, "kind", where);
    if (kind != r.kind) r = StepRuleSpec{kind};
  }
  static const std::set<std::string> kinds{"constant", "poly", "sqrt", "fixed_horizon", "power"};
  if (!kinds.count(r.kind)) throw ConfigError("step_rule.kind: unknown rule '" + r.kind + "'");
  if (j.contains("tau")) r.tau = number(j, "tau", where);
  if (j.contains("theta")) r.theta = number(j, "theta", where);
  if (j.contains("nu")) {
    if (j.at("nu").is_string()) {
      if (j.at("nu") != "lemma") throw ConfigError("step_rule.nu: expected a number or \"lemma\"");
      r.nu_from_lemma = true;
    } else {
      r.nu = number(j, "nu", where);
    }
  }
  if (j.contains("diameter")) r.diameter = number(j, "diameter", where);
  if (j.contains("sqrt_m")) r.sqrt_m = number(j, "sqrt_m", where);
  if (j.contains("horizon")) r.horizon = integer(j, "horizon", where);
  if (j.contains("gamma")) r.gamma = number(j, "gamma", where);
  if (r.nu_from_lemma && r.kind != "poly") throw ConfigError("step_rule.nu: \"lemma\" needs the poly rule");
  return r;
}

json rule_json(const StepRuleSpec& r) {
  json j{{"kind", r.kind}};
  if (r.kind == "constant") j["tau"] = r.tau;
  if (r.kind == "poly") {
    j["theta"] = r.theta;
    j["nu"] = r.nu_from_lemma ? json("lemma") : json(r.nu);
  }
  if (r.kind == "sqrt") {
    j["theta"] = r.theta;
    j["diameter"] = r.diameter;
    j["sqrt_m"] = r.sqrt_m;
  }
  if (r.kind == "fixed_horizon") {
    j["diameter"] = r.diameter;
    j["sqrt_m"] = r.sqrt_m;
    j["horizon"] = r.horizon;
  }
  if (r.kind == "power") {
    j["theta"] = r.theta;
    j["gamma"] = r.gamma;
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"experiment", "mesh", "iterations", "step_rule", "field", "model", "objective_samples",
                  "averaging_start", "output_dir", "bias", "seeds", "seed_list", "telemetry_cadence",
                  "initial_control", "reference", "fit_window", "levels", "trials", "horizon"},
                 "config");
  if (!j.contains("experiment")) throw ConfigError("config: missing 'experiment'");
  ExperimentConfig c;
  c.experiment = parse_kind(get<std::string>(j, "experiment", "config"));
  const bool convex = c.experiment == ExperimentKind::convex;
  c.lambda = convex ? 0.0 : 2.0;
  c.step_rule = default_rule(c.experiment);
  if (convex) c.averaging_start = 1;

  if (j.contains("mesh")) {
    reject_unknown(j["mesh"], {"n_div"}, "mesh");
    if (j["mesh"].contains("n_div")) c.n_div = static_cast<int>(integer(j["mesh"], "n_div", "mesh"));
  }
  if (j.contains("iterations")) c.iterations = integer(j, "iterations", "config");
  if (j.contains("step_rule")) c.step_rule = parse_rule(j["step_rule"], c.experiment);
  if (j.contains("field")) {
    const auto& f = j["field"];
    reject_unknown(f, {"mean", "std", "lower", "upper", "master_seed"}, "field");
    if (f.contains("mean")) c.field.mean = number(f, "mean", "field");
    if (f.contains("std")) c.field.std_dev = number(f, "std", "field");
    if (f.contains("lower")) c.field.lower = number(f, "lower", "field");
    if (f.contains("upper")) c.field.upper = number(f, "upper", "field");
    if (f.contains("master_seed")) {
      const auto& ms = f["master_seed"];
      if (!ms.is_number_integer() || (!ms.is_number_unsigned() && ms.get<std::int64_t>() < 0)) throw ConfigError("field.master_seed: expected a nonnegative integer");
      c.master_seed = f["master_seed"].get<std::uint64_t>();
    }
  }
  if (j.contains("model")) {
    const auto& m = j["model"];
    reject_unknown(m, {"lambda", "a_bar", "box"}, "model");
    if (m.contains("lambda")) c.lambda = number(m, "lambda", "model");
    if (m.contains("a_bar")) c.a_bar = number(m, "a_bar", "model");
    if (m.contains("box")) {
      const auto& b = m["box"];
      if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
        throw ConfigError("model.box: expected [lower, upper]");
      }
      c.box_lower = b[0].get<double>();
      c.box_upper = b[1].get<double>();
    }
  }
  if (j.contains("objective_samples")) {
    c.objective_samples = static_cast<int>(integer(j, "objective_samples", "config"));
  }
  if (j.contains("averaging_start")) {
    if (j["averaging_start"].is_null()) {
      c.averaging_start.reset();
    } else {
      c.averaging_start = integer(j, "averaging_start", "config");
    }
  }
  if (j.contains("output_dir")) c.output_dir = get<std::string>(j, "output_dir", "config");
  if (j.contains("bias") && !j["bias"].is_null()) {
    const auto& b = j["bias"];
    reject_unknown(b, {"magnitude", "exponent", "direction"}, "bias");
    BiasConfig bc;
    if (b.contains("magnitude")) bc.magnitude = number(b, "magnitude", "bias");
    if (b.contains("exponent")) bc.exponent = number(b, "exponent", "bias");
    if (b.contains("direction")) bc.direction = get<std::string>(b, "direction", "bias");
    if (bc.direction != "fixed" && bc.direction != "alternating") {
      throw ConfigError("bias.direction: expected \"fixed\" or \"alternating\"");
    }
    c.bias = bc;
  }
  if (j.contains("seeds")) c.seeds = static_cast<int>(integer(j, "seeds", "config"));
  if (j.contains("seed_list")) {
    c.seed_list = get<std::vector<std::uint64_t>>(j, "seed_list", "config");
  }
  if (j.contains("telemetry_cadence")) c.telemetry_cadence = integer(j, "telemetry_cadence", "config");
  if (j.contains("initial_control")) {
    c.initial_control = get<std::string>(j, "initial_control", "config");
    if (c.initial_control != "default" && c.initial_control != "zero") {
      throw ConfigError("initial_control: expected \"default\" or \"zero\"");
    }
  }
  if (j.contains("reference")) {
    const auto& r = j["reference"];
    reject_unknown(r, {"kind", "refine", "iterations"}, "reference");
    if (r.contains("kind")) c.reference.kind = get<std::string>(r, "kind", "reference");
    if (c.reference.kind != "expected" && c.reference.kind != "analytic" && c.reference.kind != "long_run") {
      throw ConfigError("reference.kind: expected \"expected\", \"analytic\" or \"long_run\"");
    }
    if (r.contains("refine")) c.reference.refine = static_cast<int>(integer(r, "refine", "reference"));
    if (r.contains("iterations")) c.reference.iterations = integer(r, "iterations", "reference");
    if (c.reference.refine < 1 || c.reference.iterations < 1) {
      throw ConfigError("reference: refine and iterations must be >= 1");
    }
  }
  if (j.contains("fit_window") && !j["fit_window"].is_null()) {
    const auto& w = j["fit_window"];
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
      throw ConfigError("fit_window: expected [n_lo, n_hi]");
    }
    c.fit_window = std::pair{w[0].get<double>(), w[1].get<double>()};
  }
  if (j.contains("levels")) c.levels = get<std::vector<int>>(j, "levels", "config");
  if (j.contains("trials")) c.trials = static_cast<int>(integer(j, "trials", "config"));
  if (j.contains("horizon")) c.horizon = integer(j, "horizon", "config");

  if (c.n_div < 1) throw ConfigError("mesh.n_div: must be >= 1");
  if (c.iterations < 1) throw ConfigError("iterations: must be >= 1");
  if (c.objective_samples < 1) throw ConfigError("objective_samples: must be >= 1");
  if (c.telemetry_cadence < 1) throw ConfigError("telemetry_cadence: must be >= 1");
  if (c.averaging_start && (*c.averaging_start < 1 || *c.averaging_start > c.iterations)) {
    throw ConfigError("averaging_start: must lie in [1, iterations]");
  }
  if (c.seeds < 0) throw ConfigError("seeds: must be >= 0");
  if (c.trials < 1 || c.horizon < 1) throw ConfigError("trials and horizon must be >= 1");
  if (c.levels.size() < 2) throw ConfigError("levels: need at least two mesh levels");
  for (int l : c.levels) {
    if (l < 1) throw ConfigError("levels: entries must be >= 1");
  }
  if (!(c.box_lower < c.box_upper)) throw ConfigError("model.box: lower must be below upper");
  if (!(c.lambda >= 0.0)) throw ConfigError("model.lambda: must be >= 0");
  if (!(c.a_bar > 0.0)) throw ConfigError("model.a_bar: must be positive");
  try {
    c.field.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void apply_environment(ExperimentConfig& config) {
  if (const char* dir = std::getenv("PSG_OUTPUT_DIR"); dir && *dir) config.output_dir = dir;
}

json ExperimentConfig::to_json() const {
  json j{{"experiment", to_string(experiment)},
         {"mesh", {{"n_div", n_div}}},
         {"iterations", iterations},
         {"step_rule", rule_json(step_rule)},
         {"field",
          {{"mean", field.mean},
           {"std", field.std_dev},
           {"lower", field.lower},
           {"upper", field.upper},
           {"master_seed", master_seed}}},
         {"model", {{"lambda", lambda}, {"a_bar", a_bar}, {"box", {box_lower, box_upper}}}},
         {"objective_samples", objective_samples},
         {"averaging_start", averaging_start ? json(*averaging_start) : json(nullptr)},
         {"output_dir", output_dir},
         {"seeds", seeds},
         {"seed_list", seed_list},
         {"telemetry_cadence", telemetry_cadence},
         {"initial_control", initial_control},
         {"reference", {{"kind", reference.kind}, {"refine", reference.refine}, {"iterations", reference.iterations}}},
         {"levels", levels},
         {"trials", trials},
         {"horizon", horizon}};
  j["bias"] = bias ? json{{"magnitude", bias->magnitude}, {"exponent", bias->exponent}, {"direction", bias->direction}}
                   : json(nullptr);
  j["fit_window"] = fit_window ? json{fit_window->first, fit_window->second} : json(nullptr);
  return j;
}

}  // namespace psg::app
