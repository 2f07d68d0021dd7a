#pragma once

#include <array>

#include "omsim/dynamics.hpp"
#include "omsim/types.hpp"

namespace omsim {

/// Two-mode covariance of (d, b2) over [Q_d, P_d, Q_b2, P_b2].
struct ReducedCovariance {
  Mat4 sigma = Mat4::Identity() / 2.0;

  Mat2 v1() const { return sigma.topLeftCorner<2, 2>(); }
  Mat2 v2() const { return sigma.bottomRightCorner<2, 2>(); }
  Mat2 vc() const { return sigma.topRightCorner<2, 2>(); }

  static ReducedCovariance from_blocks(const Mat2& v1, const Mat2& v2, const Mat2& vc);
};

struct EntanglementReport {
  double log_negativity = 0.0;
  double purity = 1.0;
  double eta = 0.5;    ///< smaller partially-transposed symplectic eigenvalue
  double Sigma = 0.5;  ///< det V1 + det V2 - 2 det Vc
  std::array<double, 2> nu{0.5, 0.5};
};

inline constexpr double kPhysicalTolerance = 1e-9;

ReducedCovariance reduce(const Mat6& sigma);
inline ReducedCovariance reduce(const CovarianceState& state) { return reduce(state.sigma); }

/// Fills log_negativity, eta and Sigma. Throws ValidationError for a state
/// with det sigma_r <= 0 or Sigma^2 < 4 det sigma_r - 1e-12.
EntanglementReport log_negativity(const ReducedCovariance& rc);

/// 1 / (4 sqrt(det sigma_r)). Throws ValidationError if det <= 0 or the
/// result exceeds 1 + 1e-9.
double purity(const ReducedCovariance& rc);

/// Moduli of the eigenvalues of i*Omega*sigma_r, ascending (each is doubly degenerate).
std::array<double, 2> symplectic_eigenvalues(const ReducedCovariance& rc);

/// Symplectic spectrum of the full three-mode covariance, ascending.
std::array<double, 3> symplectic_eigenvalues(const Mat6& sigma);

/// Smallest symplectic eigenvalue of the full state; physical states have >= 1/2.
double min_symplectic_eigenvalue(const Mat6& sigma);

/// E_N, purity and symplectic eigenvalues of the (d, b2) pair in one report.
EntanglementReport analyze(const ReducedCovariance& rc);
inline EntanglementReport analyze(const CovarianceState& state) { return analyze(reduce(state)); }

/// Mean occupations of (beta1, beta2, b1). beta1/beta2 are the two-mode
/// squeezed combinations of d and b2 with parameter r; b1 is untouched.
std::array<double, 3> bogoliubov_occupations(const CovarianceState& state, double r);

/// Covariance of the two-mode squeezed vacuum whose Bogoliubov modes are empty:
/// V1 = V2 = cosh(2r)/2 I, Vc = -sinh(2r)/2 diag(1, -1).
ReducedCovariance two_mode_squeezed_vacuum(double r);

}  // namespace omsim
