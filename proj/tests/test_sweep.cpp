#include <doctest.h>

#include <cmath>
#include <cstring>

#include "omsim/errors.hpp"
#include "omsim/sweep.hpp"

using namespace omsim;

namespace {

SweepSpec ratio_sweep(double delta, double damping, std::vector<double> grid) {
  SweepSpec spec;
  spec.params.delta = delta;
  spec.params.kappa = damping;
  spec.params.gamma2 = damping;
  spec.couplings = direct_couplings(0.0, 2.5);
  spec.axis = SweepAxis::CouplingRatio;
  spec.grid = std::move(grid);
  return spec;
}

int sign_changes(const std::vector<SweepRow>& rows) {
  int changes = 0, last = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double diff = rows[i].log_negativity - rows[i - 1].log_negativity;
    const int s = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

bool bitwise_equal(const SweepResult& a, const SweepResult& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (std::memcmp(&x.value, &y.value, sizeof(double)) || x.stable != y.stable ||
        std::memcmp(&x.log_negativity, &y.log_negativity, sizeof(double)) ||
        std::memcmp(&x.purity, &y.purity, sizeof(double)))
      return false;
  }
  return a.optimum.has_value() == b.optimum.has_value() && (!a.optimum || a.optimum->index == b.optimum->index);
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(run_sweep(ratio_sweep(10.0, 0.05, {})), ValidationError);
  CHECK_THROWS_AS(run_sweep(ratio_sweep(10.0, 0.05, {0.5, 0.4})), ValidationError);
  CHECK_THROWS_AS(run_sweep(ratio_sweep(10.0, 0.05, {0.5, 1.0})), ValidationError);
  CHECK_THROWS_AS(run_sweep(ratio_sweep(10.0, 0.05, {0.0, 0.5})), ValidationError);
}

TEST_CASE("single-point grid") {
  const auto result = run_sweep(ratio_sweep(10.0, 0.05, {0.6}));
  REQUIRE(result.optimum.has_value());
  CHECK(result.optimum->value == 0.6);
  CHECK(result.optimum->index == 0);
  CHECK_FALSE(result.all_unstable);
  CHECK_THROWS_AS(refine_optimum(ratio_sweep(10.0, 0.05, {0.6}), result), ValidationError);
}

TEST_CASE("parallel sweep matches the serial reference bitwise") {
  const auto spec = ratio_sweep(5.0, 0.005, default_ratio_grid(64));
  const auto serial = run_sweep_serial(spec);
  const auto parallel = run_sweep(spec);
  CHECK(bitwise_equal(serial, parallel));
  CHECK(bitwise_equal(parallel, run_sweep(spec)));
}

TEST_CASE("unstable points carry no measures") {
  // Without cavity and b2 damping the difference mode is dark at delta = 0.
  SweepSpec spec = ratio_sweep(0.0, 0.0, {0.0, 1.0});
  spec.couplings = direct_couplings(0.5, 2.5);
  spec.axis = SweepAxis::Detuning;
  const auto result = run_sweep(spec);
  CHECK_FALSE(result.rows[0].stable);
  CHECK(result.rows[0].log_negativity == 0.0);
  CHECK(result.rows[0].purity == 0.0);
  CHECK(result.rows[1].stable);
  REQUIRE(result.optimum.has_value());
  CHECK(result.optimum->index == 1);

  spec.grid = {0.0};
  const auto none = run_sweep(spec);
  CHECK(none.all_unstable);
  CHECK_FALSE(none.optimum.has_value());
}

TEST_CASE("golden-section search") {
  const double peak = 0.37213;
  const auto [x, fx] = golden_section_maximize([peak](double v) { return 1.0 - (v - peak) * (v - peak); }, 0.0, 1.0,
                                               kRefineTolerance);
  CHECK(std::abs(x - peak) <= 1e-4);
  CHECK(fx == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(golden_section_maximize([](double v) { return v; }, 1.0, 0.0, 1e-4), ValidationError);
}

TEST_CASE("ratio sweeps at large detuning") {
  struct Case {
    double damping;
    double expected_ratio;
  };
  for (const Case c : {Case{1.0 / 20.0, 0.604}, Case{1.0 / 200.0, 0.786}, Case{1.0 / 2000.0, 0.918}}) {
    const auto spec = ratio_sweep(10.0, c.damping, default_ratio_grid());
    const auto result = run_sweep(spec);
    REQUIRE(result.optimum.has_value());
    CHECK(sign_changes(result.rows) == 1);
    const auto refined = refine_optimum(spec, result);
    CHECK(refined.value == doctest::Approx(c.expected_ratio).epsilon(0.02 / c.expected_ratio));
    CHECK(refined.log_negativity >= result.optimum->log_negativity);
  }
}

TEST_CASE("purity falls with the coupling ratio") {
  for (double delta : {10.0, 5.0, 1.0}) {
    for (double damping : {1.0 / 20.0, 1.0 / 200.0, 1.0 / 2000.0}) {
      const auto result = run_sweep(ratio_sweep(delta, damping, default_ratio_grid()));
      for (std::size_t i = 1; i < result.rows.size(); ++i) {
        REQUIRE(result.rows[i].stable);
        CHECK(result.rows[i].purity <= result.rows[i - 1].purity);
      }
      // single interior maximum, except where the peak lies beyond the grid
      if (!(delta == 1.0 && damping == 1.0 / 2000.0)) CHECK(sign_changes(result.rows) == 1);
    }
  }
}

TEST_CASE("endpoint optimum cannot be refined") {
  const auto spec = ratio_sweep(10.0, 1.0 / 2000.0, {0.01, 0.02, 0.03});
  const auto result = run_sweep(spec);
  REQUIRE(result.optimum.has_value());
  CHECK(result.optimum->index == 2);
  CHECK_THROWS_AS(refine_optimum(spec, result), ValidationError);
}

TEST_CASE("default grids") {
  const auto ratios = default_ratio_grid();
  CHECK(ratios.size() == 200);
  CHECK(ratios.front() == doctest::Approx(0.01));
  CHECK(ratios.back() == doctest::Approx(0.99));
  const auto detunings = default_detuning_grid();
  CHECK(detunings.front() == doctest::Approx(0.05));
  CHECK(detunings.back() == doctest::Approx(10.0));
  CHECK(detunings[100] / detunings[99] == doctest::Approx(detunings[1] / detunings[0]));
}
