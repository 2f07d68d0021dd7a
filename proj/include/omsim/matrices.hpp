#pragma once

#include <array>
#include <optional>

#include "omsim/model.hpp"
#include "omsim/types.hpp"

namespace omsim {

enum class DriftMode { Full, Rwa };

struct DriftModel {
  SystemParams params;
  EffectiveCouplings couplings;
  DriftMode mode = DriftMode::Rwa;
};

/// Time-dependent coupling combinations entering the drift matrix.
struct GTerms {
  cplx g1, g2, g3, g4;
};

GTerms g_terms(const DriftModel& model, double t);

/// Drift matrix M(t) of the linearized Langevin equations. In RWA mode every
/// oscillating exponential is dropped and the result is t-independent.
Mat6 drift(const DriftModel& model, double t);

/// Diagonal diffusion matrix fed by the three thermal baths.
struct DiffusionMatrix {
  Vec6 diag;

  Mat6 dense() const { return diag.asDiagonal(); }
};

DiffusionMatrix diffusion(const SystemParams& params);

/// The four modulation angular frequencies present in M(t):
/// {2w1, 2(w2+delta), 2(w1+w2+delta), 2|w1-w2-delta|}.
std::array<double, 4> oscillation_frequencies(const SystemParams& params);

/// 2*pi over the largest nonzero modulation frequency; nullopt if none oscillate.
std::optional<double> shortest_oscillation_period(const SystemParams& params);

/// Common period T of M(t). Each frequency is expressed as a rational multiple
/// of the smallest one (first continued-fraction convergent with relative
/// error <= 1e-9 and denominator <= 1e6) and T = 2*pi / gcd. Returns nullopt when
/// no such approximation exists or T spans more than kMaxPeriodCycles shortest
/// oscillations.
std::optional<double> period(const DriftModel& model);

inline constexpr long long kMaxRationalDenominator = 1'000'000;
inline constexpr double kRationalTolerance = 1e-9;
inline constexpr double kMaxPeriodCycles = 1e4;

}  // namespace omsim
