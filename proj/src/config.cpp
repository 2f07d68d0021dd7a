#include "omsim/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace omsim {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 25> kKnownKeys{
    "omega1", "omega2",     "delta",  "kappa",       "gamma1",      "gamma2",      "nbar_d",
    "nbar_1", "nbar_2",     "g_minus", "g_plus",     "ratio",       "mode",        "t_end",
    "dt_out", "axis",       "grid",   "grid_points", "refine",      "occupations", "g1",
    "g2a",    "g2b",        "epsilon_plus", "epsilon_minus"};

bool known(const std::string& key) {
  return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end();
}

double number(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(std::string(key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(std::string(key) + ": must be finite");
  return x;
}

double number_or(const json& obj, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, key) : fallback;
}

bool boolean_or(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ValidationError(std::string(key) + ": expected true or false");
  return obj.at(key).get<bool>();
}

std::string string_or(const json& obj, const char* key, const char* fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ValidationError(std::string(key) + ": expected a string");
  return obj.at(key).get<std::string>();
}

cplx complex_value(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (v.is_number()) return {number(obj, key), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ValidationError(std::string(key) + ": expected a number or [re, im]");
}

void positive_if_present(const std::optional<double>& x, const char* key) {
  if (x && !(*x > 0.0)) throw ValidationError(std::string(key) + ": must be > 0");
}

EffectiveCouplings couplings_from(const json& obj, const SystemParams& params) {
  if (obj.contains("g1")) {
    for (const char* key : {"g_minus", "g_plus", "ratio"})
      if (obj.contains(key)) throw ValidationError(std::string(key) + ": not allowed together with drive keys");
    for (const char* key : {"epsilon_plus", "epsilon_minus", "g2a", "g2b"})
      if (!obj.contains(key)) throw ValidationError(std::string(key) + ": required when g1 is given");
    DriveSpec drive;
    drive.g1 = number(obj, "g1");
    drive.g2A = number(obj, "g2a");
    drive.g2B = number(obj, "g2b");
    drive.epsilon_plus = complex_value(obj, "epsilon_plus");
    drive.epsilon_minus = complex_value(obj, "epsilon_minus");
    return effective_couplings(params, drive);
  }

  if (!obj.contains("g_minus")) throw ValidationError("g_minus: required");
  const double g_minus = number(obj, "g_minus");
  if (!(g_minus > 0.0)) throw ValidationError("g_minus: must be > 0");
  if (obj.contains("g_plus") && obj.contains("ratio"))
    throw ValidationError("g_plus: give either g_plus or ratio, not both");
  double g_plus = 0.0;
  if (obj.contains("ratio")) {
    const double ratio = number(obj, "ratio");
    if (!(ratio >= 0.0 && ratio < 1.0)) throw ValidationError("ratio: G+ < G- violated (need 0 <= ratio < 1)");
    g_plus = ratio * g_minus;
  } else if (obj.contains("g_plus")) {
    g_plus = number(obj, "g_plus");
    if (!(g_plus < g_minus)) throw ValidationError("g_plus: G+ < G- violated");
    if (g_plus < 0.0) throw ValidationError("g_plus: must be >= 0");
  }
  return direct_couplings(g_plus, g_minus);
}

}  // namespace

json parse_config_object(std::string_view text) {
  json obj;
  try {
    obj = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigParseError("config parse error at line " + std::to_string(line) + ", column " +
                               std::to_string(column) + ": " + e.what(),
                           line, column);
  }
  if (!obj.is_object()) throw ValidationError("config must be a JSON object");
  return obj;
}

void apply_override(json& object, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ValidationError("override must look like key=value: " + std::string(assignment));
  const std::string key(assignment.substr(0, eq));
  const std::string_view raw = assignment.substr(eq + 1);
  json value = json::parse(raw.begin(), raw.end(), nullptr, false);
  if (value.is_discarded()) value = std::string(raw);
  object[key] = value;
}

RunConfig config_from_json(const json& obj) {
  if (!obj.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& item : obj.items())
    if (!known(item.key())) throw ValidationError(item.key() + ": unknown key");

  RunConfig cfg;
  auto& p = cfg.params;
  p.omega1 = number_or(obj, "omega1", 0.0);
  p.omega2 = number_or(obj, "omega2", 0.0);
  p.delta = number_or(obj, "delta", 0.0);
  p.kappa = number_or(obj, "kappa", 0.0);
  p.gamma1 = number_or(obj, "gamma1", 1.0);
  p.gamma2 = number_or(obj, "gamma2", 0.0);
  p.nbar_d = number_or(obj, "nbar_d", 0.0);
  p.nbar_1 = number_or(obj, "nbar_1", 0.0);
  p.nbar_2 = number_or(obj, "nbar_2", 0.0);
  p.validate();

  cfg.couplings = couplings_from(obj, p);

  const std::string mode = string_or(obj, "mode", "rwa");
  if (mode == "rwa")
    cfg.mode = DriftMode::Rwa;
  else if (mode == "full")
    cfg.mode = DriftMode::Full;
  else
    throw ValidationError("mode: expected \"rwa\" or \"full\"");

  if (obj.contains("t_end")) cfg.t_end = number(obj, "t_end");
  if (obj.contains("dt_out")) cfg.dt_out = number(obj, "dt_out");
  positive_if_present(cfg.t_end, "t_end");
  positive_if_present(cfg.dt_out, "dt_out");

  const std::string axis = string_or(obj, "axis", "coupling_ratio");
  if (axis == "coupling_ratio")
    cfg.axis = SweepAxis::CouplingRatio;
  else if (axis == "detuning")
    cfg.axis = SweepAxis::Detuning;
  else
    throw ValidationError("axis: expected \"coupling_ratio\" or \"detuning\"");

  if (obj.contains("grid")) {
    const auto& g = obj.at("grid");
    if (!g.is_array() || g.empty()) throw ValidationError("grid: expected a non-empty array of numbers");
    for (const auto& v : g) {
      if (!v.is_number()) throw ValidationError("grid: expected a non-empty array of numbers");
      cfg.grid.push_back(v.get<double>());
    }
  } else {
    std::size_t points = 200;
    if (obj.contains("grid_points")) {
      const auto& v = obj.at("grid_points");
      if (!v.is_number_integer() || v.get<long long>() < 1) throw ValidationError("grid_points: expected integer >= 1");
      points = v.get<std::size_t>();
    }
    cfg.grid = cfg.axis == SweepAxis::CouplingRatio ? default_ratio_grid(points) : default_detuning_grid(points);
  }

  cfg.refine = boolean_or(obj, "refine", true);
  cfg.occupations = boolean_or(obj, "occupations", false);
  return cfg;
}

RunConfig parse_config(std::string_view text) { return config_from_json(parse_config_object(text)); }

}  // namespace omsim
