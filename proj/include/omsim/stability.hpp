#pragma once

#include <array>
#include <functional>

#include "omsim/matrices.hpp"
#include "omsim/types.hpp"

namespace omsim {

using Spectrum6 = std::array<cplx, 6>;

/// All eigenvalues of a real 6x6 matrix (Hessenberg + shifted QR). Throws
/// NumericalError after 100*n^2 iterations without convergence.
Spectrum6 eigenvalues(const Mat6& m);

inline constexpr double kHurwitzMargin = -1e-12;

/// True iff every eigenvalue has real part < -1e-12.
bool hurwitz_stable(const Mat6& m);

/// RWA models only; throws ValidationError for FULL mode.
bool hurwitz_stable(const DriftModel& model);

struct FloquetResult {
  Spectrum6 multipliers{};
  double period = 0.0;
  double max_modulus = 0.0;
  bool stable = false;
};

using DriftFunction = std::function<Mat6(double)>;

/// Principal matrix solution Pi(T) of dPi/dt = M(t) Pi with Pi(0) = I, using
/// `steps` RK4 steps.
Mat6 monodromy(const DriftFunction& m, double period, int steps);

/// Floquet multipliers of a T-periodic drift; the step count is the smallest
/// that keeps the RK4 step at or below max_step.
FloquetResult floquet(const DriftFunction& m, double period, double max_step);

/// Uses period(model) and a step of at most T_min/100. An RWA model without
/// any modulation frequency is constant, so T = 1 is used. Throws
/// ValidationError when the modulation frequencies are incommensurate.
FloquetResult floquet(const DriftModel& model);

}  // namespace omsim
