#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "omsim/errors.hpp"
#include "omsim/matrices.hpp"
#include "omsim/sweep.hpp"

namespace omsim {

/// Malformed JSON; the message carries line and column.
class ConfigParseError : public ValidationError {
 public:
  ConfigParseError(const std::string& what, std::size_t line, std::size_t column)
      : ValidationError(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Everything a subcommand needs, validated up front.
struct RunConfig {
  SystemParams params;
  EffectiveCouplings couplings;
  DriftMode mode = DriftMode::Rwa;

  // evolve
  std::optional<double> t_end;
  std::optional<double> dt_out;

  // sweep
  SweepAxis axis = SweepAxis::CouplingRatio;
  std::vector<double> grid;  ///< empty: default grid for the axis
  bool refine = true;
  bool occupations = false;
};

/// Parses the JSON text into an object, throwing ConfigParseError on bad syntax
/// and ValidationError if the top level is not an object.
nlohmann::json parse_config_object(std::string_view text);

/// Applies a `key=value` override. The value is read as JSON when it parses,
/// otherwise as a bare string.
void apply_override(nlohmann::json& object, std::string_view assignment);

/// Validates keys and values and derives couplings (directly from g_minus with
/// g_plus or ratio, or from the drive keys). Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& object);

RunConfig parse_config(std::string_view text);

}  // namespace omsim
