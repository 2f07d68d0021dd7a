#include "omsim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "omsim/errors.hpp"

namespace omsim {

namespace {

constexpr std::array<int, 4> kReducedIndices{0, 1, 4, 5};

template <int N>
std::array<double, N / 2> symplectic_spectrum(const Eigen::Matrix<double, N, N>& sigma) {
  using MatN = Eigen::Matrix<double, N, N>;
  MatN omega = MatN::Zero();
  for (int k = 0; k < N / 2; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  const MatN sym = (sigma + sigma.transpose()) / 2.0;
  Eigen::EigenSolver<MatN> solver(omega * sym, false);
  if (solver.info() != Eigen::Success) throw NumericalError("symplectic spectrum did not converge");

  std::array<double, N> moduli;
  for (int i = 0; i < N; ++i) moduli[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
  std::sort(moduli.begin(), moduli.end());
  std::array<double, N / 2> out;
  for (int k = 0; k < N / 2; ++k)
    out[static_cast<std::size_t>(k)] = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
  return out;
}

// Extended precision keeps det sigma_r accurate when entries grow like cosh(2r).
long double det_ext(const Mat4& m) { return m.cast<long double>().determinant(); }
long double det_ext(const Mat2& m) { return m.cast<long double>().determinant(); }

}  // namespace

ReducedCovariance ReducedCovariance::from_blocks(const Mat2& v1, const Mat2& v2, const Mat2& vc) {
  ReducedCovariance rc;
  rc.sigma << v1, vc, vc.transpose(), v2;
  return rc;
}

ReducedCovariance reduce(const Mat6& sigma) {
  ReducedCovariance rc;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rc.sigma(i, j) = sigma(kReducedIndices[i], kReducedIndices[j]);
  return rc;
}

EntanglementReport log_negativity(const ReducedCovariance& rc) {
  const long double det = det_ext(rc.sigma);
  if (!(det > 0.0L)) throw ValidationError("nonphysical state: det sigma_r <= 0");
  const long double Sigma = det_ext(rc.v1()) + det_ext(rc.v2()) - 2.0L * det_ext(rc.vc());
  const long double disc = Sigma * Sigma - 4.0L * det;
  if (disc < -1e-12L) throw ValidationError("nonphysical state: Sigma^2 < 4 det sigma_r");

  // Sigma - sqrt(disc) rewritten to avoid cancellation for strongly squeezed states.
  const long double root = std::sqrt(std::max(disc, 0.0L));
  const double eta = static_cast<double>(std::sqrt(2.0L * det / (Sigma + root)));

  EntanglementReport out;
  out.Sigma = static_cast<double>(Sigma);
  out.eta = eta;
  out.log_negativity = std::max(0.0, -std::log(2.0 * eta));
  return out;
}

double purity(const ReducedCovariance& rc) {
  const long double det = det_ext(rc.sigma);
  if (!(det > 0.0L)) throw ValidationError("nonphysical state: det sigma_r <= 0");
  const double mu = static_cast<double>(1.0L / (4.0L * std::sqrt(det)));
  if (mu > 1.0 + kPhysicalTolerance) throw ValidationError("nonphysical state: purity exceeds 1");
  return mu;
}

std::array<double, 2> symplectic_eigenvalues(const ReducedCovariance& rc) {
  return symplectic_spectrum<4>(rc.sigma);
}

std::array<double, 3> symplectic_eigenvalues(const Mat6& sigma) { return symplectic_spectrum<6>(sigma); }

double min_symplectic_eigenvalue(const Mat6& sigma) { return symplectic_eigenvalues(sigma)[0]; }

EntanglementReport analyze(const ReducedCovariance& rc) {
  EntanglementReport out = log_negativity(rc);
  out.purity = purity(rc);
  out.nu = symplectic_eigenvalues(rc);
  return out;
}

std::array<double, 3> bogoliubov_occupations(const CovarianceState& state, double r) {
  if (!(r >= 0.0)) throw ValidationError("squeezing parameter must be >= 0");
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  Mat6 S = Mat6::Identity();
  S(0, 0) = c;  S(0, 4) = s;   // Q_beta1
  S(1, 1) = c;  S(1, 5) = -s;  // P_beta1
  S(4, 4) = c;  S(4, 0) = s;   // Q_beta2
  S(5, 5) = c;  S(5, 1) = -s;  // P_beta2
  const Mat6 t = S * state.sigma * S.transpose();
  const auto occupation = [&t](int q) { return (t(q, q) + t(q + 1, q + 1)) / 2.0 - 0.5; };
  return {occupation(0), occupation(4), occupation(2)};
}

ReducedCovariance two_mode_squeezed_vacuum(double r) {
  const double ch = std::cosh(2.0 * r) / 2.0;
  const double sh = std::sinh(2.0 * r) / 2.0;
  const Mat2 v = ch * Mat2::Identity();
  Mat2 vc;
  vc << -sh, 0.0, 0.0, sh;
  return ReducedCovariance::from_blocks(v, v, vc);
}

}  // namespace omsim
