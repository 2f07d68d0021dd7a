#include "omsim/matrices.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace omsim {

namespace {

// exp(i 2 w t), with the large-argument reduction done in extended precision
cplx phase(long double w, double t) {
  const long double a = 2.0L * w * static_cast<long double>(t);
  return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

struct Fraction {
  long long num;
  long long den;
};

// First continued-fraction convergent of x within the relative tolerance.
std::optional<Fraction> rational_approximation(double x) {
  long long h_prev = 1, h_prev2 = 0;
  long long k_prev = 0, k_prev2 = 1;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rest);
    if (a > 1e12) return std::nullopt;
    const auto ai = static_cast<long long>(a);
    const long long h = ai * h_prev + h_prev2;
    const long long k = ai * k_prev + k_prev2;
    if (k > kMaxRationalDenominator) return std::nullopt;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= kRationalTolerance * x)
      return Fraction{h, k};
    const double frac = rest - a;
    if (frac <= 0.0) return std::nullopt;
    rest = 1.0 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

std::vector<double> nonzero_frequencies(const SystemParams& params) {
  std::vector<double> out;
  const auto all = oscillation_frequencies(params);
  const double scale = *std::max_element(all.begin(), all.end());
  for (double f : all)
    if (f > 1e-12 * scale) out.push_back(f);
  return out;
}

}  // namespace

GTerms g_terms(const DriftModel& model, double t) {
  const double gp = model.couplings.G_plus;
  const double gm = model.couplings.G_minus;
  if (model.mode == DriftMode::Rwa) return {gp, gm, gp, gm};

  const long double w1 = model.params.omega1;
  const long double w2 = model.params.omega2;
  const long double dl = model.params.delta;
  const cplx e_w1 = phase(w1, t);
  const cplx e_w2d = phase(w2 + dl, t);
  const cplx e_sum = phase(w1 + w2 + dl, t);
  const cplx e_diff = phase(w1 - w2 - dl, t);

  GTerms g;
  g.g1 = gp + gm * e_w1;
  g.g2 = gm + gp * std::conj(e_w1);
  g.g3 = gp * (1.0 + e_sum) + gm * (e_w2d + e_w1);
  g.g4 = gm * (1.0 + e_diff) + gp * (std::conj(e_w2d) + e_w1);
  return g;
}

Mat6 drift(const DriftModel& model, double t) {
  const auto& p = model.params;
  const auto [g1, g2, g3, g4] = g_terms(model, t);
  const cplx s12 = g1 + g2, d21 = g2 - g1;
  const cplx s34 = g3 + g4, d43 = g4 - g3;

  Mat6 m = Mat6::Zero();
  m(0, 0) = -p.kappa / 2.0;
  m(0, 1) = p.delta;
  m(0, 2) = s12.imag();
  m(0, 3) = d21.real();

  m(1, 0) = -p.delta;
  m(1, 1) = -p.kappa / 2.0;
  m(1, 2) = -s12.real();
  m(1, 3) = d21.imag();

  m(2, 0) = -d21.imag();  // Im(G1 - G2)
  m(2, 1) = d21.real();
  m(2, 2) = -p.gamma1 / 2.0;
  m(2, 4) = s34.imag();
  m(2, 5) = d43.real();

  m(3, 0) = -s12.real();
  m(3, 1) = -s12.imag();
  m(3, 3) = -p.gamma1 / 2.0;
  m(3, 4) = -s34.real();
  m(3, 5) = d43.imag();

  m(4, 2) = -d43.imag();  // Im(G3 - G4)
  m(4, 3) = d43.real();
  m(4, 4) = -p.gamma2 / 2.0;
  m(4, 5) = -p.delta;

  m(5, 2) = -s34.real();
  m(5, 3) = -s34.imag();
  m(5, 4) = p.delta;
  m(5, 5) = -p.gamma2 / 2.0;
  return m;
}

DiffusionMatrix diffusion(const SystemParams& params) {
  const double d = params.kappa * (2.0 * params.nbar_d + 1.0) / 2.0;
  const double b1 = params.gamma1 * (2.0 * params.nbar_1 + 1.0) / 2.0;
  const double b2 = params.gamma2 * (2.0 * params.nbar_2 + 1.0) / 2.0;
  DiffusionMatrix out;
  out.diag << d, d, b1, b1, b2, b2;
  return out;
}

std::array<double, 4> oscillation_frequencies(const SystemParams& p) {
  return {2.0 * p.omega1, 2.0 * std::abs(p.omega2 + p.delta), 2.0 * std::abs(p.omega1 + p.omega2 + p.delta),
          2.0 * std::abs(p.omega1 - p.omega2 - p.delta)};
}

std::optional<double> shortest_oscillation_period(const SystemParams& params) {
  const auto f = nonzero_frequencies(params);
  if (f.empty()) return std::nullopt;
  return 2.0 * std::numbers::pi / *std::max_element(f.begin(), f.end());
}

std::optional<double> period(const DriftModel& model) {
  const auto freqs = nonzero_frequencies(model.params);
  if (freqs.empty()) return std::nullopt;
  const double base = *std::min_element(freqs.begin(), freqs.end());

  std::vector<Fraction> ratios;
  long long lcm = 1;
  for (double f : freqs) {
    const auto q = rational_approximation(f / base);
    if (!q) return std::nullopt;
    ratios.push_back(*q);
    lcm = std::lcm(lcm, q->den);
    if (lcm > kMaxRationalDenominator) return std::nullopt;
  }
  long long g = 0;
  for (const auto& q : ratios) g = std::gcd(g, q.num * (lcm / q.den));

  const double f_gcd = base * static_cast<double>(g) / static_cast<double>(lcm);
  const double T = 2.0 * std::numbers::pi / f_gcd;
  const double t_min = *shortest_oscillation_period(model.params);
  if (T / t_min > kMaxPeriodCycles) return std::nullopt;
  return T;
}

}  // namespace omsim
