#include "omsim/commands.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "omsim/dynamics.hpp"
#include "omsim/measures.hpp"
#include "omsim/stability.hpp"

namespace omsim {

namespace {

using ojson = nlohmann::ordered_json;

DriftModel model_of(const RunConfig& cfg) { return DriftModel{cfg.params, cfg.couplings, cfg.mode}; }

ojson rounded(double x) { return round_significant(x); }

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// Exit code 2 must precede any output, so stability is settled first.
void require_stable(const DriftModel& model) {
  if (model.mode == DriftMode::Rwa) {
    if (!hurwitz_stable(model)) throw UnstableModelError("RWA drift is not Hurwitz stable");
    return;
  }
  if (!period(model)) return;  // no Floquet test possible; divergence is caught while integrating
  const FloquetResult f = floquet(model);
  if (!f.stable)
    throw UnstableModelError("Floquet multiplier modulus " + format_number(f.max_modulus) + " >= 1");
}

}  // namespace

ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return ExitCode::InvalidConfig;
  if (dynamic_cast<const UnstableModelError*>(&e)) return ExitCode::Unstable;
  return ExitCode::NumericalFailure;
}

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 12);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

double round_significant(double x) {
  if (!std::isfinite(x)) return x;
  const std::string s = format_number(x);
  double out = x;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

CommandOutput cmd_steady(const RunConfig& cfg) {
  if (cfg.mode != DriftMode::Rwa) throw ValidationError("mode: steady state requires \"rwa\"");
  const DriftModel model = model_of(cfg);
  require_stable(model);

  const CovarianceState steady = lyapunov_steady_state(model, diffusion(cfg.params));
  const EntanglementReport report = analyze(steady);
  const auto occupations = bogoliubov_occupations(steady, cfg.couplings.r);

  ojson sigma = ojson::array();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) sigma.push_back(rounded(steady.sigma(i, j)));

  ojson record;
  record["E_N"] = rounded(report.log_negativity);
  record["mu"] = rounded(report.purity);
  record["eta"] = rounded(report.eta);
  record["sigma"] = sigma;
  record["symplectic_eigenvalues"] = {rounded(report.nu[0]), rounded(report.nu[1])};
  record["bogoliubov_occupations"] = {rounded(occupations[0]), rounded(occupations[1]), rounded(occupations[2])};

  CommandOutput out;
  out.data = dump(record);
  if (!rwa_valid(cfg.params, cfg.couplings)) out.warning = "RWA validity condition not met (advisory)";
  return out;
}

CommandOutput cmd_evolve(const RunConfig& cfg) {
  if (!cfg.t_end) throw ValidationError("t_end: required for evolve");
  if (!cfg.dt_out) throw ValidationError("dt_out: required for evolve");
  const DriftModel model = model_of(cfg);
  require_stable(model);

  EvolveOptions opts;
  opts.t_end = *cfg.t_end;
  opts.dt_out = *cfg.dt_out;

  std::string csv = "t,E_N,mu,nu_min\n";
  evolve(model, diffusion(cfg.params), thermal_initial_state(cfg.params), opts, [&csv](const CovarianceState& s) {
    EntanglementReport report;
    double nu_min = 0.0;
    try {
      report = analyze(s);
      nu_min = min_symplectic_eigenvalue(s.sigma);
    } catch (const ValidationError& e) {
      throw NumericalError("nonphysical covariance at t = " + format_number(s.t) + ": " + e.what());
    }
    csv += format_number(s.t) + ',' + format_number(report.log_negativity) + ',' + format_number(report.purity) +
           ',' + format_number(nu_min) + '\n';
  });

  CommandOutput out;
  out.data = std::move(csv);
  return out;
}

CommandOutput cmd_floquet(const RunConfig& cfg) {
  const FloquetResult f = floquet(model_of(cfg));
  ojson multipliers = ojson::array();
  for (const cplx z : f.multipliers) multipliers.push_back({rounded(z.real()), rounded(z.imag())});

  ojson record;
  record["period"] = rounded(f.period);
  record["multipliers"] = multipliers;
  record["max_modulus"] = rounded(f.max_modulus);
  record["stable"] = f.stable;

  CommandOutput out;
  out.data = dump(record);
  return out;
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
  if (cfg.mode != DriftMode::Rwa) throw ValidationError("mode: sweeps use the RWA steady state");
  SweepSpec spec;
  spec.params = cfg.params;
  spec.couplings = cfg.couplings;
  spec.axis = cfg.axis;
  spec.grid = cfg.grid;
  spec.measures.occupations = cfg.occupations;

  const SweepResult result = run_sweep(spec);
  const char* axis = axis_name(spec.axis);

  std::string csv = cfg.occupations ? "axis,value,E_N,mu,stable,n_beta1,n_beta2,n_b1\n" : "axis,value,E_N,mu,stable\n";
  for (const auto& row : result.rows) {
    csv += std::string(axis) + ',' + format_number(row.value) + ',';
    if (row.stable)
      csv += format_number(row.log_negativity) + ',' + format_number(row.purity) + ",1";
    else
      csv += ",,0";
    if (cfg.occupations) {
      for (const double n : row.occupations) csv += ',' + (row.stable ? format_number(n) : std::string());
    }
    csv += '\n';
  }

  CommandOutput out;
  out.data = std::move(csv);

  ojson record;
  record["axis"] = axis;
  record["all_unstable"] = result.all_unstable;
  if (!result.optimum) {
    record["optimum"] = nullptr;
    out.warning = "every grid point is unstable";
  } else {
    const auto& grid_opt = *result.optimum;
    SweepOptimum best = grid_opt;
    bool refined = false;
    const bool interior = grid_opt.index > 0 && grid_opt.index + 1 < result.rows.size();
    if (cfg.refine && interior) {
      best = refine_optimum(spec, result);
      refined = true;
    }
    ojson opt;
    opt["value"] = rounded(best.value);
    opt["E_N"] = rounded(best.log_negativity);
    opt["mu"] = rounded(evaluate_point(spec, best.value).purity);
    opt["refined"] = refined;
    opt["grid_value"] = rounded(grid_opt.value);
    opt["grid_E_N"] = rounded(grid_opt.log_negativity);
    record["optimum"] = opt;
    if (cfg.refine && !interior) out.warning = "optimum on a grid endpoint; not refined";
  }
  out.optimum = dump(record);
  return out;
}

}  // namespace omsim
