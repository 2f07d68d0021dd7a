#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "omsim/matrices.hpp"
#include "omsim/types.hpp"

namespace omsim {

/// Symmetrized second moments of the six quadratures at time t (vacuum = I/2).
struct CovarianceState {
  double t = 0.0;
  Mat6 sigma = Mat6::Identity() / 2.0;
};

using Trajectory = std::vector<CovarianceState>;

/// Every mode in equilibrium with its own bath.
CovarianceState thermal_initial_state(const SystemParams& params);

struct EvolveOptions {
  double t_end = 0.0;
  double dt_out = 0.0;
  /// Caps the RK4 step below the automatic choice (used for convergence checks).
  std::optional<double> max_step;
};

inline constexpr double kDivergenceThreshold = 1e12;
inline constexpr double kMinStep = 1e-12;

/// RK4 step actually used by evolve: the automatic bound, shrunk so that an
/// integer number of steps spans dt_out.
double evolve_step(const DriftModel& model, const EvolveOptions& opts);

/// Covariance right-hand side M sigma + sigma M^T + D.
Mat6 covariance_rhs(const Mat6& m, const Mat6& sigma, const Vec6& diffusion_diag);

using SampleSink = std::function<void(const CovarianceState&)>;

/// Integrates the covariance ODE with fixed-step classical RK4 from init.t to
/// opts.t_end, invoking sink at every multiple of dt_out (not at init).
/// Throws NumericalError on divergence (|sigma_ij| > 1e12) or step underflow.
void evolve(const DriftModel& model, const DiffusionMatrix& diffusion, const CovarianceState& init,
            const EvolveOptions& opts, const SampleSink& sink);

Trajectory evolve(const DriftModel& model, const DiffusionMatrix& diffusion,
                  const CovarianceState& init, const EvolveOptions& opts);

/// Solves M sigma + sigma M^T + D = 0 for a Hurwitz RWA drift by a dense
/// 36-unknown LU solve. Throws UnstableModelError if M is not Hurwitz and
/// NumericalError on a vanishing pivot or excessive residual.
CovarianceState lyapunov_steady_state(const DriftModel& model, const DiffusionMatrix& diffusion);

/// Same solve for an arbitrary drift; no Hurwitz check.
Mat6 solve_lyapunov(const Mat6& m, const Mat6& d);

/// max |M sigma + sigma M^T + D|.
double lyapunov_residual(const Mat6& m, const Mat6& sigma, const Mat6& d);

inline constexpr double kLyapunovResidualTolerance = 1e-10;
inline constexpr double kPivotTolerance = 1e-14;

}  // namespace omsim
