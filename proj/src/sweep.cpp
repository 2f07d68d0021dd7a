#include "omsim/sweep.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "omsim/dynamics.hpp"
#include "omsim/errors.hpp"
#include "omsim/measures.hpp"
#include "omsim/stability.hpp"

namespace omsim {

namespace {

DriftModel point_model(const SweepSpec& spec, double value) {
  DriftModel model{spec.params, spec.couplings, DriftMode::Rwa};
  if (spec.axis == SweepAxis::CouplingRatio)
    model.couplings = direct_couplings(value * spec.couplings.G_minus, spec.couplings.G_minus);
  else
    model.params.delta = value;
  return model;
}

void locate_optimum(SweepResult& result) {
  bool any_stable = false;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    if (!row.stable) continue;
    any_stable = true;
    if (!result.optimum || row.log_negativity > result.optimum->log_negativity)
      result.optimum = SweepOptimum{row.value, row.log_negativity, i};
  }
  result.all_unstable = !any_stable;
}

}  // namespace

const char* axis_name(SweepAxis axis) {
  return axis == SweepAxis::CouplingRatio ? "coupling_ratio" : "detuning";
}

void SweepSpec::validate() const {
  params.validate();
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("sweep grid must be strictly increasing");
  if (axis == SweepAxis::CouplingRatio && !(grid.front() > 0.0 && grid.back() < 1.0))
    throw ValidationError("coupling ratios must lie in (0, 1)");
  if (!(couplings.G_minus > 0.0)) throw ValidationError("sweep needs G- > 0");
}

SweepRow evaluate_point(const SweepSpec& spec, double value) {
  const DriftModel model = point_model(spec, value);
  SweepRow row;
  row.value = value;
  row.stable = hurwitz_stable(model);
  if (!row.stable) return row;

  const CovarianceState steady = lyapunov_steady_state(model, diffusion(model.params));
  const ReducedCovariance rc = reduce(steady);
  if (spec.measures.log_negativity) row.log_negativity = log_negativity(rc).log_negativity;
  if (spec.measures.purity) row.purity = purity(rc);
  if (spec.measures.occupations) row.occupations = bogoliubov_occupations(steady, model.couplings.r);
  return row;
}

SweepResult run_sweep_serial(const SweepSpec& spec) {
  spec.validate();
  SweepResult result;
  result.rows.reserve(spec.grid.size());
  for (double value : spec.grid) result.rows.push_back(evaluate_point(spec, value));
  locate_optimum(result);
  return result;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto n = static_cast<long>(spec.grid.size());
  SweepResult result;
  result.rows.resize(spec.grid.size());
  std::vector<std::exception_ptr> errors(spec.grid.size());

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      result.rows[k] = evaluate_point(spec, spec.grid[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  locate_optimum(result);
  return result;
}

std::pair<double, double> golden_section_maximize(const std::function<double(double)>& f, double lo,
                                                  double hi, double tol) {
  if (!(hi > lo) || !(tol > 0.0)) throw ValidationError("golden section needs lo < hi and tol > 0");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = (a + b) / 2.0;
  return {x, f(x)};
}

SweepOptimum refine_optimum(const SweepSpec& spec, const SweepResult& result) {
  if (!result.optimum) throw ValidationError("sweep has no stable optimum to refine");
  const std::size_t i = result.optimum->index;
  if (i == 0 || i + 1 >= result.rows.size())
    throw ValidationError("optimum lies on a grid endpoint; no bracket to refine");

  const auto objective = [&spec](double x) {
    const SweepRow row = evaluate_point(spec, x);
    return row.stable ? row.log_negativity : -std::numeric_limits<double>::infinity();
  };
  const auto [x, fx] = golden_section_maximize(objective, spec.grid[i - 1], spec.grid[i + 1], kRefineTolerance);
  if (fx < result.optimum->log_negativity) return *result.optimum;
  return SweepOptimum{x, fx, i};
}

std::vector<double> default_ratio_grid(std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = n == 1 ? 0.5 : 0.01 + 0.98 * static_cast<double>(i) / static_cast<double>(n - 1);
  return grid;
}

std::vector<double> default_detuning_grid(std::size_t n) {
  std::vector<double> grid(n);
  const double lo = std::log(0.05), hi = std::log(10.0);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = n == 1 ? 1.0 : std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return grid;
}

}  // namespace omsim
