#pragma once

#include <exception>
#include <optional>
#include <string>

#include "omsim/config.hpp"

namespace omsim {

enum class ExitCode : int {
  Ok = 0,
  Unstable = 2,
  InvalidConfig = 3,
  NumericalFailure = 4,
};

ExitCode exit_code_for(const std::exception& e);

/// Rendered output of a subcommand. `data` is the main CSV/JSON payload; sweeps
/// also produce a JSON record of the optimum.
struct CommandOutput {
  std::string data;
  std::optional<std::string> optimum;
  std::string warning;  ///< non-fatal diagnostic for stderr, may be empty
};

/// Steady-state record of the RWA model (JSON).
CommandOutput cmd_steady(const RunConfig& cfg);

/// Time series t,E_N,mu,nu_min from the thermal initial state (CSV).
CommandOutput cmd_evolve(const RunConfig& cfg);

/// Floquet multipliers of the drift over one modulation period (JSON).
CommandOutput cmd_floquet(const RunConfig& cfg);

/// axis,value,E_N,mu,stable rows plus the (refined) optimum.
CommandOutput cmd_sweep(const RunConfig& cfg);

/// 12 significant digits, '.' decimal point regardless of locale.
std::string format_number(double x);

/// x rounded to 12 significant digits, for JSON emission.
double round_significant(double x);

}  // namespace omsim
