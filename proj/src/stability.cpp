#include "omsim/stability.hpp"

#include <algorithm>
#include <cmath>

#include "omsim/errors.hpp"

namespace omsim {

namespace {

constexpr double kFloquetStepFraction = 1.0 / 100.0;

double fastest_rate(const DriftModel& model) {
  const auto& p = model.params;
  return std::max({p.kappa, p.gamma1, p.gamma2, model.couplings.G_minus, std::abs(p.delta)});
}

}  // namespace

Spectrum6 eigenvalues(const Mat6& m) {
  if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");
  Eigen::EigenSolver<Mat6> solver;
  solver.setMaxIterations(100 * 6 * 6);
  solver.compute(m, false);
  if (solver.info() != Eigen::Success) throw NumericalError("QR iteration did not converge");

  Spectrum6 out;
  for (int i = 0; i < 6; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

bool hurwitz_stable(const Mat6& m) {
  const auto spectrum = eigenvalues(m);
  return std::all_of(spectrum.begin(), spectrum.end(), [](cplx z) { return z.real() < kHurwitzMargin; });
}

bool hurwitz_stable(const DriftModel& model) {
  if (model.mode != DriftMode::Rwa) throw ValidationError("Hurwitz test applies to the constant RWA drift");
  return hurwitz_stable(drift(model, 0.0));
}

Mat6 monodromy(const DriftFunction& m, double period, int steps) {
  if (!(period > 0.0) || steps < 1) throw ValidationError("monodromy needs period > 0 and steps >= 1");
  const double h = period / steps;
  Mat6 pi = Mat6::Identity();
  for (int n = 0; n < steps; ++n) {
    const double t = n * h;
    const Mat6 m0 = m(t);
    const Mat6 mh = m(t + h / 2.0);
    const Mat6 m1 = m(t + h);
    const Mat6 k1 = m0 * pi;
    const Mat6 k2 = mh * (pi + (h / 2.0) * k1);
    const Mat6 k3 = mh * (pi + (h / 2.0) * k2);
    const Mat6 k4 = m1 * (pi + h * k3);
    pi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!pi.allFinite()) throw NumericalError("principal matrix solution diverged");
  }
  return pi;
}

FloquetResult floquet(const DriftFunction& m, double period, double max_step) {
  if (!(max_step > 0.0)) throw ValidationError("max_step must be > 0");
  const int steps = static_cast<int>(std::ceil(period / max_step * (1.0 - 1e-12)));
  FloquetResult out;
  out.period = period;
  out.multipliers = eigenvalues(monodromy(m, period, std::max(steps, 1)));
  for (const cplx z : out.multipliers) out.max_modulus = std::max(out.max_modulus, std::abs(z));
  out.stable = out.max_modulus < 1.0;
  return out;
}

FloquetResult floquet(const DriftModel& model) {
  auto T = period(model);
  if (!T) {
    if (model.mode == DriftMode::Full && shortest_oscillation_period(model.params))
      throw ValidationError("modulation frequencies are incommensurate; M(t) has no usable period");
    T = 1.0;
  }
  double max_step = 0.01 / fastest_rate(model);
  if (const auto t_min = shortest_oscillation_period(model.params))
    max_step = std::min(max_step, *t_min * kFloquetStepFraction);
  return floquet([&model](double t) { return drift(model, t); }, *T, max_step);
}

}  // namespace omsim
