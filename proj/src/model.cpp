#include "omsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "omsim/errors.hpp"

namespace omsim {

namespace {

constexpr double kRealnessTolerance = 1e-6;
constexpr double kMatchingTolerance = 1e-9;

void require_non_negative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw ValidationError(std::string(name) + " must be finite and >= 0");
}

// Pole of the stationary amplitude: kappa = 0 and omega1 = +/-delta.
cplx amplitude(cplx epsilon, double kappa, double delta, double sideband) {
  if (epsilon == cplx{}) return {};
  const cplx denominator{-kappa / 2.0, -delta + sideband};
  const double scale = std::max({1.0, std::abs(delta), std::abs(sideband)});
  if (std::abs(denominator) <= 1e-15 * scale)
    throw ValidationError("singular drive denominator: kappa = 0 and delta on the sideband");
  return cplx{0.0, 1.0} * epsilon / denominator;
}

double real_amplitude(cplx a, const char* name) {
  const double modulus = std::abs(a);
  if (modulus > 0.0 && std::abs(a.imag()) / modulus >= kRealnessTolerance)
    throw ValidationError(std::string(name) + " is not real; adjust the drive phase");
  return a.real();
}

void check_matching(double derived, double requested, const char* name) {
  const double scale = std::max(std::abs(derived), std::abs(requested));
  if (std::abs(derived - requested) > kMatchingTolerance * scale)
    throw ValidationError(std::string("coupling mismatch: g1 * a != ") + name);
}

}  // namespace

void SystemParams::validate() const {
  if (gamma1 != 1.0) throw ValidationError("gamma1 is the unit of all rates and must equal 1");
  require_non_negative(kappa, "kappa");
  require_non_negative(gamma2, "gamma2");
  require_non_negative(nbar_d, "nbar_d");
  require_non_negative(nbar_1, "nbar_1");
  require_non_negative(nbar_2, "nbar_2");
  require_non_negative(omega1, "omega1");
  require_non_negative(omega2, "omega2");
  if (!std::isfinite(delta)) throw ValidationError("delta must be finite");
}

std::pair<cplx, cplx> classical_amplitudes(const SystemParams& params, const DriveSpec& drive) {
  require_non_negative(params.kappa, "kappa");
  return {amplitude(drive.epsilon_plus, params.kappa, params.delta, params.omega1),
          amplitude(drive.epsilon_minus, params.kappa, params.delta, -params.omega1)};
}

EffectiveCouplings effective_couplings(const SystemParams& params, const DriveSpec& drive) {
  const auto [a_plus, a_minus] = classical_amplitudes(params, drive);
  const double G_plus = drive.g1 * real_amplitude(a_plus, "a_plus");
  const double G_minus = drive.g1 * real_amplitude(a_minus, "a_minus");
  check_matching(G_plus, drive.g2A, "g2A");
  check_matching(G_minus, drive.g2B, "g2B");

  EffectiveCouplings c = direct_couplings(G_plus, G_minus);
  c.a_plus = a_plus;
  c.a_minus = a_minus;
  return c;
}

EffectiveCouplings direct_couplings(double G_plus, double G_minus) {
  if (!std::isfinite(G_plus) || !std::isfinite(G_minus))
    throw ValidationError("couplings must be finite");
  if (G_plus < 0.0) throw ValidationError("G+ must be >= 0");
  if (!(G_plus < G_minus))
    throw CouplingInstabilityError("instability: G+ < G- is required");

  EffectiveCouplings c;
  c.G_plus = G_plus;
  c.G_minus = G_minus;
  c.r = std::atanh(G_plus / G_minus);
  c.G = std::sqrt((G_minus - G_plus) * (G_minus + G_plus));
  return c;
}

bool rwa_valid(const SystemParams& params, const EffectiveCouplings& couplings) {
  const double slowest =
      std::min({params.omega1, params.omega2, std::abs(params.omega1 - params.omega2 - params.delta)});
  return slowest >= kRwaValidityRatio * std::max(couplings.G_plus, couplings.G_minus);
}

}  // namespace omsim
