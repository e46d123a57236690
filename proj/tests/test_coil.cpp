#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pcbot/coil.hpp"
#include "pcbot/errors.hpp"

using namespace pcbot;
using namespace pcbot::coil;

namespace {

// Composite Simpson rule on [a, b] with n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// On-axis field of a unit-current loop of radius r at height z.
double loop_bz(double r, double z) {
  return kMu0 * r * r / (2.0 * std::pow(r * r + z * z, 1.5));
}

MagnetCoupling nominal_coupling() { return MagnetCoupling{}; }

}  // namespace

TEST(SimpleCoil, FillsSpanWithWholeTurns) {
  const auto c = simple_coil(CoilBounds{}, 0.7e-3);
  EXPECT_EQ(c.turns(), 13u);  // 12 mm / 0.9 mm
  EXPECT_DOUBLE_EQ(c.width(0), 0.7e-3);
  EXPECT_NO_THROW(c.validate());
  EXPECT_NEAR(c.center_radii().front(), 2.45e-3, 1e-15);
}

TEST(SimpleCoil, RejectsInfeasibleWidths) {
  EXPECT_THROW((void)simple_coil(CoilBounds{}, 0.1e-3), InvalidGeometryError);
  CoilBounds tiny;
  tiny.r1 = tiny.r0 + 0.3e-3;
  EXPECT_THROW((void)simple_coil(tiny, 0.7e-3), InfeasibleBoundsError);
}

TEST(CoilSpec, ValidationCatchesViolations) {
  CoilSpec c{CoilBounds{}, {0.3e-3, 0.9e-3}};
  EXPECT_THROW(c.validate(), InvalidGeometryError);  // width 0.1 mm < 0.2 mm
  c.pitches = std::vector<double>(20, 0.9e-3);
  EXPECT_THROW(c.validate(), InvalidGeometryError);  // 18 mm > 12 mm span
  c.pitches.clear();
  EXPECT_THROW(c.validate(), InvalidGeometryError);
  CoilBounds b;
  b.r1 = b.r0;
  EXPECT_THROW(b.validate(), InvalidGeometryError);
}

TEST(Resistance, MatchesContinuousIntegralForConstantPitch) {
  // With constant pitch s the turn density is 1/s, and the midpoint sum over
  // turn centres equals the integral of 2 pi rho r / (W s) over the filled span.
  const auto c = simple_coil(CoilBounds{}, 0.7e-3);
  const double s = c.pitches[0];
  const double w = c.width(0);
  const double rho = c.bounds.rho_s;
  const double r_end = c.bounds.r0 + s * c.turns();
  const double oracle =
      c.bounds.layers *
      simpson([&](double r) { return 2.0 * std::numbers::pi * rho * r / (w * s); }, c.bounds.r0, r_end, 200);
  EXPECT_NEAR(coil_resistance(c), oracle, 1e-12 * oracle);
}

TEST(Resistance, BaselineValue) {
  EXPECT_NEAR(coil_resistance(simple_coil(CoilBounds{}, 0.7e-3)), 0.9163, 1e-3);
}

TEST(Resistance, NonPositiveWidthThrows) {
  CoilSpec c{CoilBounds{}, {0.2e-3}};
  EXPECT_THROW((void)coil_resistance(c), InvalidGeometryError);
}

TEST(ForcePerAmp, MatchesFiniteDifferenceOfLoopField) {
  const auto c = simple_coil(CoilBounds{}, 0.7e-3);
  const auto m = nominal_coupling();
  const double eps = 1e-8;
  double oracle = 0.0;
  for (double depth : m.layer_depths) {
    const double z = m.height + depth;
    for (double r : c.center_radii())
      oracle += -(loop_bz(r, z + eps) - loop_bz(r, z - eps)) / (2.0 * eps);
  }
  oracle *= m.moment;
  EXPECT_NEAR(force_per_amp(c, m.moment, m.height, m.layer_depths), oracle, 1e-6 * oracle);
}

TEST(ForcePerAmp, BaselineValueAndLinearInMoment) {
  const auto c = simple_coil(CoilBounds{}, 0.7e-3);
  const auto m = nominal_coupling();
  const double k = force_per_amp(c, m.moment, m.height, m.layer_depths);
  EXPECT_NEAR(k, 0.0644, 5e-4);
  EXPECT_DOUBLE_EQ(force_per_amp(c, 2.0 * m.moment, m.height, m.layer_depths), 2.0 * k);
  EXPECT_THROW((void)force_per_amp(c, m.moment, 0.0, m.layer_depths), DomainError);
}

TEST(Objective, CurrentCancels) {
  const auto c = simple_coil(CoilBounds{}, 0.5e-3);
  const CircuitConfig circuit;
  const auto m = nominal_coupling();
  const double base = coil_objective(c, circuit, m);
  for (double current : {1e-3, 0.5, 5.0, 37.0, -5.0})
    EXPECT_NEAR(objective_at_current(c, circuit, m, current), base, 1e-13 * base);
}

TEST(Objective, ZeroCouplingIsDegenerate) {
  const auto c = simple_coil(CoilBounds{}, 0.7e-3);
  MagnetCoupling m;
  m.moment = 0.0;
  EXPECT_THROW((void)coil_objective(c, CircuitConfig{}, m), DegenerateObjectiveError);
}

TEST(Circuit, ValidationRequiresQuasiStaticPulse) {
  CircuitConfig c;
  EXPECT_NO_THROW(c.validate());
  c.t_lr = 5e-4;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Optimizer, BeatsBaselineByQuarter) {
  OptimizerOptions opt;
  opt.exec = Execution::Serial;
  const auto r = optimize_coil(CoilBounds{}, CircuitConfig{}, nominal_coupling(), opt);
  EXPECT_NO_THROW(r.coil.validate());
  EXPECT_GT(r.baseline_objective, 0.0);
  EXPECT_LE(r.objective, 0.75 * r.baseline_objective);
  const double direct = coil_objective(r.coil, CircuitConfig{}, nominal_coupling());
  EXPECT_DOUBLE_EQ(direct, r.objective);
  EXPECT_NEAR(energy_savings(r.coil, simple_coil(CoilBounds{}, 0.7e-3), CircuitConfig{}, nominal_coupling()),
              1.0 - r.objective / r.baseline_objective, 1e-12);
}

TEST(Optimizer, HistoryIsMonotone) {
  OptimizerOptions opt;
  opt.exec = Execution::Serial;
  opt.restarts = 2;
  const auto r = optimize_coil(CoilBounds{}, CircuitConfig{}, nominal_coupling(), opt);
  ASSERT_GE(r.history.size(), 2u);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1]);
  EXPECT_DOUBLE_EQ(r.history.back(), r.objective);
}

TEST(Optimizer, SinglePointSpanHasOneTurn) {
  CoilBounds b;
  b.r1 = b.r0 + 0.5e-3;  // room for exactly one minimum-pitch turn
  OptimizerOptions opt;
  opt.exec = Execution::Serial;
  const auto r = optimize_coil(b, CircuitConfig{}, nominal_coupling(), opt);
  EXPECT_EQ(r.coil.turns(), 1u);
  EXPECT_NO_THROW(r.coil.validate());
  EXPECT_DOUBLE_EQ(r.baseline_objective, 0.0);  // 0.7 mm baseline does not fit
}

TEST(Optimizer, InfeasibleBoundsThrow) {
  CoilBounds b;
  b.r1 = b.r0 + 0.3e-3;
  EXPECT_THROW((void)optimize_coil(b, CircuitConfig{}, nominal_coupling()), InfeasibleBoundsError);
}

TEST(Refine, KeepsTurnCountAndImproves) {
  const auto start = simple_coil(CoilBounds{}, 0.7e-3);
  OptimizerOptions opt;
  opt.exec = Execution::Serial;
  const auto r = refine_coil(start, CircuitConfig{}, nominal_coupling(), opt);
  EXPECT_EQ(r.coil.turns(), start.turns());
  EXPECT_LT(r.objective, coil_objective(start, CircuitConfig{}, nominal_coupling()));
  EXPECT_NO_THROW(r.coil.validate());
}
