#include "omsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "omsim/errors.hpp"
#include "omsim/stability.hpp"

namespace omsim {

namespace {

constexpr double kRwaStepScale = 0.01;
constexpr double kPeriodStepFraction = 1.0 / 200.0;
constexpr long long kMaxPhaseTable = 2'000'000;

double rate_bound(const DriftModel& model) {
  const auto& p = model.params;
  const double fastest = std::max({p.kappa, p.gamma1, p.gamma2, model.couplings.G_minus, std::abs(p.delta)});
  return kRwaStepScale / fastest;
}

void symmetrize(Mat6& s) { s = ((s + s.transpose()) * 0.5).eval(); }

// Drift values at every half step of one modulation period, so the periodic
// FULL model is evaluated once per phase rather than once per stage.
class DriftTable {
 public:
  DriftTable(const DriftModel& model, double t0, double h) : model_(model), t0_(t0), h_(h) {
    if (model.mode == DriftMode::Rwa) {
      table_.push_back(drift(model, t0));
      return;
    }
    const auto T = period(model);
    if (!T) return;
    const double steps = *T / h;
    const double rounded = std::round(steps);
    if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * steps || 2 * rounded > kMaxPhaseTable) return;
    const auto half_steps = static_cast<long long>(2 * rounded);
    table_.resize(static_cast<std::size_t>(half_steps));
    for (long long j = 0; j < half_steps; ++j)
      table_[static_cast<std::size_t>(j)] = drift(model, t0 + static_cast<double>(j) * h / 2.0);
  }

  // Steps per period when the table is periodic, else 0.
  long long period_steps() const { return table_.size() > 1 ? static_cast<long long>(table_.size()) / 2 : 0; }

  // Drift at t0 + half_step * h / 2.
  Mat6 at(long long half_step) const {
    if (table_.size() == 1) return table_.front();
    if (!table_.empty()) return table_[static_cast<std::size_t>(half_step % static_cast<long long>(table_.size()))];
    return drift(model_, t0_ + static_cast<double>(half_step) * h_ / 2.0);
  }

 private:
  const DriftModel& model_;
  double t0_;
  double h_;
  std::vector<Mat6> table_;
};

constexpr int kPackedSize = 21;
constexpr long long kMaxPropagatorPhases = 4096;
using PackedVec = Eigen::Matrix<double, kPackedSize, 1>;

struct IntervalMap {
  Eigen::Matrix<double, kPackedSize, kPackedSize> linear;
  PackedVec offset;
};

PackedVec pack(const Mat6& s) {
  PackedVec v;
  int n = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) v(n++) = s(i, j);
  return v;
}

Mat6 unpack(const PackedVec& v) {
  Mat6 s;
  int n = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) s(i, j) = s(j, i) = v(n++);
  return s;
}

bool diverged(const Mat6& s) {
  for (int i = 0; i < s.size(); ++i) {
    const double v = s.data()[i];
    if (!std::isfinite(v) || std::abs(v) > kDivergenceThreshold) return true;
  }
  return false;
}

}  // namespace

CovarianceState thermal_initial_state(const SystemParams& params) {
  CovarianceState s;
  s.t = 0.0;
  Vec6 diag;
  diag << params.nbar_d + 0.5, params.nbar_d + 0.5, params.nbar_1 + 0.5, params.nbar_1 + 0.5,
      params.nbar_2 + 0.5, params.nbar_2 + 0.5;
  s.sigma = diag.asDiagonal();
  return s;
}

double evolve_step(const DriftModel& model, const EvolveOptions& opts) {
  if (!(opts.dt_out > 0.0)) throw ValidationError("dt_out must be > 0");
  double h_max = rate_bound(model);
  if (model.mode == DriftMode::Full) {
    if (const auto t_min = shortest_oscillation_period(model.params))
      h_max = std::min(h_max, *t_min * kPeriodStepFraction);
  }
  if (opts.max_step) h_max = std::min(h_max, *opts.max_step);
  h_max = std::min(h_max, opts.dt_out);
  const double substeps = std::ceil(opts.dt_out / h_max * (1.0 - 1e-12));
  const double h = opts.dt_out / substeps;
  if (!(h >= kMinStep)) throw NumericalError("RK4 step underflow");
  return h;
}

Mat6 covariance_rhs(const Mat6& m, const Mat6& sigma, const Vec6& diffusion_diag) {
  Mat6 x = m * sigma;
  Mat6 out = x + x.transpose();
  out.diagonal() += diffusion_diag;
  return out;
}

void evolve(const DriftModel& model, const DiffusionMatrix& diffusion, const CovarianceState& init,
            const EvolveOptions& opts, const SampleSink& sink) {
  if (!(opts.t_end > init.t)) throw ValidationError("t_end must exceed the initial time");
  const double h = evolve_step(model, opts);
  const auto substeps = static_cast<long long>(std::llround(opts.dt_out / h));
  const auto samples = static_cast<long long>(std::floor((opts.t_end - init.t) / opts.dt_out + 1e-9));

  const DriftTable table(model, init.t, h);
  const Vec6& dd = diffusion.diag;
  Mat6 s = init.sigma;
  symmetrize(s);

  const auto rk4 = [&](Mat6& x, long long first, long long count, const Vec6& dvec, bool check) {
    for (long long step = first; step < first + count; ++step) {
      const Mat6 m0 = table.at(2 * step);
      const Mat6 mh = table.at(2 * step + 1);
      const Mat6 m1 = table.at(2 * step + 2);
      const Mat6 k1 = covariance_rhs(m0, x, dvec);
      const Mat6 k2 = covariance_rhs(mh, x + (h / 2.0) * k1, dvec);
      const Mat6 k3 = covariance_rhs(mh, x + (h / 2.0) * k2, dvec);
      const Mat6 k4 = covariance_rhs(m1, x + h * k3, dvec);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      symmetrize(x);
      if (check && diverged(x))
        throw NumericalError("covariance diverged at t = " +
                             std::to_string(init.t + static_cast<double>(step + 1) * h));
    }
  };

  // An RK4 sweep over one output interval is an affine map of the 21 independent
  // covariance entries. For a periodic drift only a few distinct maps occur.
  const long long n_period = model.mode == DriftMode::Rwa ? 1 : table.period_steps();
  if (n_period > 0) {
    const long long phases = n_period / std::gcd(n_period, substeps);
    const long long build_cost = phases * substeps * (kPackedSize + 1);
    if (phases <= kMaxPropagatorPhases && 2 * build_cost < samples * substeps) {
      std::vector<IntervalMap> maps(static_cast<std::size_t>(phases));
      std::vector<bool> built(maps.size(), false);
      PackedVec v = pack(s);
      for (long long k = 1; k <= samples; ++k) {
        const long long first = (k - 1) * substeps;
        const auto phase = static_cast<std::size_t>((first % n_period) / std::gcd(n_period, substeps));
        if (!built[phase]) {
          IntervalMap& map = maps[phase];
          for (int b = 0; b < kPackedSize; ++b) {
            Mat6 x = unpack(PackedVec::Unit(b));
            rk4(x, first, substeps, Vec6::Zero(), false);
            map.linear.col(b) = pack(x);
          }
          Mat6 x = Mat6::Zero();
          rk4(x, first, substeps, dd, false);
          map.offset = pack(x);
          built[phase] = true;
        }
        v = (maps[phase].linear * v + maps[phase].offset).eval();
        s = unpack(v);
        if (diverged(s))
          throw NumericalError("covariance diverged at t = " +
                               std::to_string(init.t + static_cast<double>(k) * opts.dt_out));
        sink(CovarianceState{init.t + static_cast<double>(k) * opts.dt_out, s});
      }
      return;
    }
  }

  for (long long k = 1; k <= samples; ++k) {
    rk4(s, (k - 1) * substeps, substeps, dd, true);
    sink(CovarianceState{init.t + static_cast<double>(k) * opts.dt_out, s});
  }
}

Trajectory evolve(const DriftModel& model, const DiffusionMatrix& diffusion, const CovarianceState& init,
                  const EvolveOptions& opts) {
  Trajectory out;
  evolve(model, diffusion, init, opts, [&out](const CovarianceState& s) { out.push_back(s); });
  return out;
}

Mat6 solve_lyapunov(const Mat6& m, const Mat6& d) {
  using Mat36 = Eigen::Matrix<double, 36, 36>;
  using Vec36 = Eigen::Matrix<double, 36, 1>;
  const Mat6 id = Mat6::Identity();
  // Column-major vec: vec(M S) = (I (x) M) vec S, vec(S M^T) = (M (x) I) vec S.
  Mat36 a = Mat36::Zero();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) a.block<6, 6>(6 * i, 6 * j) = id(i, j) * m + m(i, j) * id;

  const Eigen::PartialPivLU<Mat36> lu(a);
  const double scale = a.cwiseAbs().maxCoeff();
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() < kPivotTolerance * scale)
    throw NumericalError("Lyapunov system is singular");

  const Vec36 rhs = -Eigen::Map<const Vec36>(d.data());
  Vec36 x = lu.solve(rhs);
  x += lu.solve(rhs - a * x);  // one step of iterative refinement
  Mat6 sigma = Eigen::Map<const Mat6>(x.data());
  symmetrize(sigma);
  return sigma;
}

double lyapunov_residual(const Mat6& m, const Mat6& sigma, const Mat6& d) {
  return (m * sigma + sigma * m.transpose() + d).cwiseAbs().maxCoeff();
}

CovarianceState lyapunov_steady_state(const DriftModel& model, const DiffusionMatrix& diffusion) {
  if (model.mode != DriftMode::Rwa) throw ValidationError("steady state is defined for the RWA model only");
  const Mat6 m = drift(model, 0.0);
  if (!hurwitz_stable(m)) throw UnstableModelError("RWA drift is not Hurwitz stable");

  const Mat6 d = diffusion.dense();
  CovarianceState out;
  out.t = 0.0;
  out.sigma = solve_lyapunov(m, d);
  const double residual = lyapunov_residual(m, out.sigma, d);
  if (residual > kLyapunovResidualTolerance * d.cwiseAbs().maxCoeff())
    throw NumericalError("Lyapunov residual " + std::to_string(residual) + " exceeds tolerance");
  return out;
}

}  // namespace omsim
