#pragma once

#include <complex>
#include <optional>
#include <utility>

namespace omsim {

using cplx = std::complex<double>;

/// Physical rates and frequencies of the three-mode system, all in units of
/// the intermediate-mode damping gamma1 (which is therefore exactly 1).
struct SystemParams {
  double omega1 = 0.0;  ///< intermediate mechanical frequency
  double omega2 = 0.0;  ///< second mode (mechanical or microwave) frequency
  double delta = 0.0;   ///< cavity-drive detuning omega_c - omega_d
  double kappa = 0.0;   ///< cavity decay
  double gamma1 = 1.0;  ///< base unit
  double gamma2 = 0.0;
  double nbar_d = 0.0;
  double nbar_1 = 0.0;
  double nbar_2 = 0.0;

  /// Throws ValidationError on negative rates/occupancies or gamma1 != 1.
  void validate() const;
};

/// Two-tone cavity drive plus the modulation amplitudes of g2(t).
struct DriveSpec {
  cplx epsilon_plus{};
  cplx epsilon_minus{};
  double g1 = 0.0;
  double g2A = 0.0;
  double g2B = 0.0;
};

struct EffectiveCouplings {
  double G_plus = 0.0;
  double G_minus = 0.0;
  std::optional<cplx> a_plus;   ///< set only when derived from a DriveSpec
  std::optional<cplx> a_minus;
  double r = 0.0;  ///< two-mode squeezing parameter, atanh(G+/G-)
  double G = 0.0;  ///< Bogoliubov coupling, sqrt(G-^2 - G+^2)
};

/// Stationary classical cavity amplitudes for the two drive tones.
/// Throws ValidationError when kappa = 0 and delta = -/+ omega1 (pole).
std::pair<cplx, cplx> classical_amplitudes(const SystemParams& params, const DriveSpec& drive);

/// Effective couplings G± = g1 * a±. The amplitudes must be real to 1e-6
/// (relative) and match g2A/g2B to 1e-9; requires 0 <= G+ < G-.
EffectiveCouplings effective_couplings(const SystemParams& params, const DriveSpec& drive);

/// Builds couplings straight from G±, bypassing the drive. Requires 0 <= G+ < G-.
EffectiveCouplings direct_couplings(double G_plus, double G_minus);

/// Advisory RWA-validity flag: min(omega1, omega2, |omega1 - omega2 - delta|)
/// must exceed 10 * max(G+, G-).
bool rwa_valid(const SystemParams& params, const EffectiveCouplings& couplings);

inline constexpr double kRwaValidityRatio = 10.0;

}  // namespace omsim
