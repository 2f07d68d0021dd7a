#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "omsim/matrices.hpp"

namespace omsim {

enum class SweepAxis { CouplingRatio, Detuning };

const char* axis_name(SweepAxis axis);

struct MeasureSet {
  bool log_negativity = true;
  bool purity = true;
  bool occupations = false;
};

/// One-dimensional scan of the RWA steady state. CouplingRatio keeps G- fixed
/// and sets G+ = value * G-; Detuning sets delta = value.
struct SweepSpec {
  SystemParams params;
  EffectiveCouplings couplings;
  SweepAxis axis = SweepAxis::CouplingRatio;
  std::vector<double> grid;
  MeasureSet measures;

  /// Throws ValidationError: empty or non-increasing grid, ratio outside (0, 1).
  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  bool stable = false;
  double log_negativity = 0.0;  // meaningful only when stable
  double purity = 0.0;
  std::array<double, 3> occupations{};
};

struct SweepOptimum {
  double value = 0.0;
  double log_negativity = 0.0;
  std::size_t index = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<SweepOptimum> optimum;  ///< max E_N over stable rows, ties to smaller value
  bool all_unstable = false;
};

/// Steady-state measures at a single axis value.
SweepRow evaluate_point(const SweepSpec& spec, double value);

/// Grid points evaluated in parallel (OpenMP); rows keep grid order.
SweepResult run_sweep(const SweepSpec& spec);

/// Single-threaded reference; must agree with run_sweep bit for bit.
SweepResult run_sweep_serial(const SweepSpec& spec);

/// Maximizes f on [lo, hi] by golden-section search down to an interval of width tol.
std::pair<double, double> golden_section_maximize(const std::function<double(double)>& f,
                                                  double lo, double hi, double tol);

inline constexpr double kRefineTolerance = 1e-4;

/// Golden-section refinement of E_N between the grid neighbours of the
/// optimum. Throws ValidationError if there is no optimum or it sits on a grid
/// endpoint.
SweepOptimum refine_optimum(const SweepSpec& spec, const SweepResult& result);

/// 200 uniform ratios on [0.01, 0.99].
std::vector<double> default_ratio_grid(std::size_t n = 200);

/// 200 log-spaced detunings on [0.05, 10].
std::vector<double> default_detuning_grid(std::size_t n = 200);

}  // namespace omsim
