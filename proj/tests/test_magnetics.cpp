#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pcbot/actuator.hpp"
#include "pcbot/config.hpp"
#include "pcbot/errors.hpp"
#include "pcbot/magnetics.hpp"

using namespace pcbot;
using namespace pcbot::magnetics;

namespace {

ExperimentConfig nominal() { return default_config(); }

ForceModel nominal_model() {
  const auto cfg = nominal();
  return make_force_model(cfg.solenoid, cfg.coil.actuator_coil(), cfg.coil.layer_depths);
}

// Root by exhaustive scan: first sign change on a uniform grid.
double dense_scan_root(const ForceModel& m, double current, int n, double* step) {
  const double d = m.config().d;
  const double lo = 0.05 * d;
  const double hi = 0.95 * d;
  *step = (hi - lo) / n;
  double prev = total_force(m, lo, current);
  for (int i = 1; i <= n; ++i) {
    const double h = lo + i * *step;
    const double f = total_force(m, h, current);
    if ((f < 0.0) != (prev < 0.0)) return h - 0.5 * *step;
    prev = f;
  }
  return NAN;
}

}  // namespace

TEST(ZeroCurrentForce, RejectsHeightsOutsideGap) {
  const auto m = nominal_model();
  EXPECT_THROW((void)zero_current_force(m, 0.0), DomainError);
  EXPECT_THROW((void)zero_current_force(m, m.config().d), DomainError);
  EXPECT_THROW((void)zero_current_force(m, -1e-3), DomainError);
  EXPECT_NO_THROW((void)zero_current_force(m, 1e-3));
}

TEST(ZeroCurrentForce, StrictlyIncreasingOnFineGrid) {
  const auto m = nominal_model();
  const double d = m.config().d;
  double prev = zero_current_force(m, d * 1e-3);
  for (int i = 2; i < 1000; ++i) {
    const double f = zero_current_force(m, d * i / 1000.0);
    ASSERT_GT(f, prev) << "at h = " << d * i / 1000.0;
    prev = f;
  }
}

TEST(ZeroCurrentForce, MatchesClosedForm) {
  const auto m = nominal_model();
  const auto& c = m.config();
  const double h = 2.0e-3;
  const double expect = c.a_core / std::pow(c.d - h + c.core_offset, 4) - c.a_plate / std::pow(2 * h, 4);
  EXPECT_DOUBLE_EQ(zero_current_force(m, h), expect);
}

TEST(Calibration, HitsBothTargets) {
  const auto cfg = nominal();
  ASSERT_TRUE(cfg.surrogate_fit.has_value());
  const ForceModel bare(cfg.solenoid, nullptr);
  EXPECT_NEAR(zero_current_force(bare, 2.3e-3), 0.0, 1e-12);
  const double attached = 0.45 * (-zero_current_force(bare, cfg.solenoid.h_a) + 1e-3 * 9.81);
  EXPECT_NEAR(attached, 0.073, 1e-12);
  EXPECT_NEAR(cfg.surrogate_fit->residuals[0], 0.0, 1e-12);
  EXPECT_NEAR(cfg.surrogate_fit->residuals[1], 0.0, 1e-12);
}

TEST(Calibration, NonPhysicalTargetsThrow) {
  auto cfg = nominal();
  CalibrationTargets t;
  t.attached_friction = 1e-4;  // less than the magnet weight alone would give
  EXPECT_THROW((void)calibrate_surrogate(cfg.solenoid, t), CalibrationError);
}

TEST(FindEquilibrium, ZeroCurrentRootIsCalibrationHeight) {
  const auto m = nominal_model();
  EXPECT_NEAR(find_equilibrium(m, 0.0), 2.3e-3, 1e-7);
}

TEST(FindEquilibrium, MatchesDenseScanOracle) {
  const auto m = nominal_model();
  for (double current = -5.0; current <= 5.0; current += 1.0) {
    double step = 0.0;
    const double oracle = dense_scan_root(m, current, 20000, &step);
    ASSERT_FALSE(std::isnan(oracle));
    EXPECT_NEAR(find_equilibrium(m, current), oracle, step) << "I = " << current;
  }
}

TEST(FindEquilibrium, ResidualForceWithinTolerance) {
  const auto m = nominal_model();
  for (double current : {-5.0, -2.5, 0.0, 2.5, 5.0})
    EXPECT_LT(std::abs(total_force(m, find_equilibrium(m, current), current)), 1e-5);
}

TEST(FindEquilibrium, NoSignChangeThrows) {
  // A uniform coil gradient overwhelms the magnet forces at large currents.
  const ForceModel m(nominal().solenoid, [](double) { return 1.0; });
  EXPECT_THROW((void)find_equilibrium(m, 1000.0), NoEquilibriumError);
  EXPECT_THROW((void)find_equilibrium(m, -1000.0), NoEquilibriumError);
  EXPECT_NO_THROW((void)find_equilibrium(m, 0.0));
}

TEST(FindEquilibrium, NonincreasingInCurrent) {
  const auto m = nominal_model();
  double prev = find_equilibrium(m, -5.0);
  for (int i = -4; i <= 5; ++i) {
    const double h = find_equilibrium(m, i);
    EXPECT_LE(h, prev) << "I = " << i;
    prev = h;
  }
}

TEST(CoilCoupling, PositiveCurrentPushesMagnetTowardTable) {
  const auto m = nominal_model();
  // Below the coil face, k > 0 and raises the force; h_eq(+I0) < h_eq(0).
  EXPECT_GT(m.coil_force_per_amp(2.0e-3), 0.0);
  EXPECT_LT(m.coil_force_per_amp(6.0e-3), 0.0);
}

TEST(Bistability, NominalMarginsExceedTenthMillimetre) {
  const auto r = verify_bistability(nominal_model());
  EXPECT_TRUE(r.ordering_holds);
  for (double margin : r.margins) EXPECT_GE(margin, 1e-4);
  EXPECT_LT(r.h_eq_positive, r.h_eq_zero);
  EXPECT_LT(r.h_eq_zero, r.h_eq_negative);
}

TEST(Bistability, InvertedHeightsFailWithNegativeMargin) {
  auto cfg = nominal();
  std::swap(cfg.solenoid.h_a, cfg.solenoid.h_d);
  const auto m = make_force_model(cfg.solenoid, cfg.coil.actuator_coil(), cfg.coil.layer_depths);
  const auto r = verify_bistability(m);
  EXPECT_FALSE(r.ordering_holds);
  EXPECT_LT(r.min_margin(), 0.0);
}

TEST(EquilibriumMap, OneCellPerGridPoint) {
  const auto cfg = nominal();
  const auto ds = cfg.bistability.ds();
  const auto cells = equilibrium_map(cfg.solenoid, ds, cfg.bistability.currents,
                                     force_model_factory(cfg.coil.actuator_coil(), cfg.coil.layer_depths),
                                     Execution::Serial);
  ASSERT_EQ(cells.size(), ds.size() * cfg.bistability.currents.size());
  EXPECT_DOUBLE_EQ(cells.front().d, 5e-3);
  EXPECT_DOUBLE_EQ(cells.back().d, 10e-3);
  EXPECT_DOUBLE_EQ(cells.front().current, -5.0);
  // At the nominal gap every current has an equilibrium.
  for (const auto& c : cells)
    if (std::abs(c.d - 7.5e-3) < 1e-12) EXPECT_TRUE(c.h_eq.has_value());
}

TEST(EquilibriumMap, MissingRootsAreEmptyCells) {
  const auto cfg = nominal();
  const std::vector<double> ds{7.5e-3};
  const std::vector<double> currents{0.0, 1000.0};
  const auto uniform = [](const SolenoidConfig& s) { return ForceModel(s, [](double) { return 1.0; }); };
  const auto cells = equilibrium_map(cfg.solenoid, ds, currents, uniform);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_TRUE(cells[0].h_eq.has_value());
  EXPECT_FALSE(cells[1].h_eq.has_value());
}

TEST(SolenoidConfig, ValidationRejectsBadGeometry) {
  auto s = nominal().solenoid;
  s.h_a = 8e-3;
  EXPECT_THROW(s.validate(), ConfigError);
  s = nominal().solenoid;
  s.a_core = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = nominal().solenoid;
  s.d = -1.0;
  EXPECT_THROW(s.validate(), ConfigError);
}
