#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "pcbot/config.hpp"
#include "pcbot/dynamics.hpp"
#include "pcbot/errors.hpp"
#include "pcbot/planner.hpp"
#include "pcbot/sensor.hpp"
#include "pcbot/spll.hpp"
#include "pcbot/trajectory.hpp"

using namespace pcbot;
using namespace pcbot::control;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

double mod_pi_error(double a, double b) {
  const double e = a - b;
  return e - kPi * std::floor(e / kPi + 0.5);
}

dynamics::TableConfig quiet_table() {
  dynamics::TableConfig t;
  t.friction_noise.amplitude = 0.0;
  return t;
}

const PhaseDirectionMap& nominal_map() {
  static const PhaseDirectionMap map = [] {
    CalibrationOptions o;
    o.exec = Execution::Serial;
    return calibrate_phase_map(dynamics::RobotBody{}, quiet_table(), o);
  }();
  return map;
}

struct TraceSample {
  double t;
  double angle;
};

// Body angle of an attached robot on the nominal table, sampled at the sensor rate.
std::vector<TraceSample> spinning_body(double seconds, double rate) {
  const dynamics::Table table(quiet_table());
  const dynamics::RobotBody body;
  auto s = dynamics::initial_state(table, body);
  std::vector<TraceSample> out{{s.time, s.body_angle}};
  const double dt = 1.0 / rate;
  while (s.time < seconds) {
    s = dynamics::step(s, body, table, dt);
    out.push_back({s.time, s.body_angle});
  }
  return out;
}

}  // namespace

TEST(SenseIntensity, MalusLawWithFloor) {
  LightSensorModel m;
  m.polarizer_offset = 0.4;
  m.ambient_floor = 0.15;
  std::mt19937_64 rng(1);
  EXPECT_DOUBLE_EQ(sense_intensity(m, 0.4, rng), 1.0);
  EXPECT_NEAR(sense_intensity(m, 0.4 + kPi / 2, rng), 0.15, 1e-15);
  for (double a : {0.0, 0.3, 1.7, -2.2})
    EXPECT_NEAR(sense_intensity(m, a, rng), sense_intensity(m, a + kPi, rng), 1e-15);
}

TEST(SenseIntensity, NoiseHasRequestedSpread) {
  LightSensorModel m;
  m.noise_sigma = 0.02;
  std::mt19937_64 rng(3);
  double s = 0.0, ss = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double v = sense_intensity(m, 0.0, rng) - 1.0;
    s += v;
    ss += v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 1e-3);
  EXPECT_NEAR(std::sqrt(ss / n), 0.02, 1e-3);
}

TEST(SenseIntensity, ValidationBoundsFloor) {
  LightSensorModel m;
  m.ambient_floor = 1.0;
  EXPECT_THROW(m.validate(), ConfigError);
  m = LightSensorModel{};
  m.sample_rate = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
}

TEST(Spll, LocksOnSimulatedRobotWithinTenRotations) {
  LightSensorModel sensor;
  sensor.polarizer_offset = 0.25;
  SoftwarePll pll({.polarizer_offset = sensor.polarizer_offset});
  std::mt19937_64 rng(1);
  const auto trace = spinning_body(10.0, sensor.sample_rate);
  const double rotation = 60.0 / 115.0;
  double lock_time = -1.0;
  double worst = 0.0;
  for (const auto& x : trace) {
    const auto& st = pll.update(sense_intensity(sensor, x.angle, rng), x.t);
    if (st.locked && lock_time < 0) lock_time = x.t;
    if (x.t > 8.0) worst = std::max(worst, std::abs(mod_pi_error(pll.phase_at(x.t), x.angle)));
  }
  ASSERT_GE(lock_time, 0.0);
  EXPECT_LT(lock_time, 10 * rotation);
  EXPECT_LT(worst, 5 * kDeg);
  EXPECT_TRUE(pll.state().locked);
  EXPECT_NEAR(pll.state().frequency_estimate, 2 * kPi * 115.0 / 60.0, 0.01 * 2 * kPi * 115.0 / 60.0);
}

TEST(Spll, GainScalingLeavesEstimatesUnchanged) {
  SoftwarePll a, b;
  LightSensorModel sensor;
  std::mt19937_64 rng(1);
  const double w = 2 * kPi * 115.0 / 60.0;
  for (int i = 0; i < 3000; ++i) {
    const double t = i / 500.0;
    const double v = sense_intensity(sensor, w * t, rng);
    a.update(v, t);
    b.update(2.0 * v, t);
  }
  EXPECT_GT(a.crossings(), 10);
  EXPECT_EQ(a.crossings(), b.crossings());
  EXPECT_NEAR(a.state().last_crossing, b.state().last_crossing, 1e-12);
  EXPECT_NEAR(a.state().phase_estimate, b.state().phase_estimate, 1e-9);
  EXPECT_NEAR(a.state().frequency_estimate, b.state().frequency_estimate, 1e-9);
}

TEST(Spll, ConstantSignalNeverLocks) {
  SoftwarePll pll;
  for (int i = 0; i < 5000; ++i) pll.update(0.7, i / 500.0);
  EXPECT_FALSE(pll.state().locked);
  EXPECT_EQ(pll.crossings(), 0);
  EXPECT_EQ(pll.state().frequency_estimate, 0.0);
}

TEST(PhaseMap, ReproducesGridAndIsEquivariant) {
  const auto& map = nominal_map();
  ASSERT_EQ(map.phases.size(), 24u);
  for (std::size_t i = 0; i < map.phases.size(); ++i)
    EXPECT_DOUBLE_EQ(map.direction_at(map.phases[i]), map.directions[i]);
  for (double phi = 0.05; phi < 2 * kPi; phi += 0.37) {
    const double delta = 0.9;
    EXPECT_NEAR(trajectory::wrap_pi(map.direction_at(phi + delta) - map.direction_at(phi)), delta, 1 * kDeg);
  }
  // Step length does not depend on phase on a uniform table.
  for (double s : map.steps) EXPECT_NEAR(s, map.mean_step(), 0.01 * map.mean_step());
}

TEST(PhaseMap, InverseRoundTrips) {
  const auto& map = nominal_map();
  for (double phi = 0.0; phi < 2 * kPi; phi += 0.1)
    EXPECT_NEAR(std::remainder(map.phase_for(map.direction_at(phi)) - phi, 2 * kPi), 0.0, 1e-9);
}

TEST(PhaseMap, RefusesNoisyTable) {
  EXPECT_THROW((void)calibrate_phase_map(dynamics::RobotBody{}, dynamics::TableConfig{}), DomainError);
}

TEST(PhaseMap, ValidationRejectsNonMonotoneMaps) {
  PhaseDirectionMap m{{0.0, 1.0, 2.0}, {0.0, 0.5, 0.4}, {1.0, 1.0, 1.0}};
  EXPECT_THROW(m.validate(), DomainError);
}

TEST(PlanStraight, EmptyForZeroCycles) {
  EXPECT_TRUE(plan_straight(0.0, 0, nominal_map()).commands.empty());
}

TEST(PlanStraight, PerpendicularDirectionsDifferByQuarterTurn) {
  const auto a = plan_straight(0.0, 1, nominal_map());
  const auto b = plan_straight(kPi / 2, 1, nominal_map());
  const double diff = std::remainder(b.commands[0].detach_phase - a.commands[0].detach_phase, 2 * kPi);
  EXPECT_NEAR(diff, kPi / 2, 1 * kDeg);
}

TEST(PlanStraight, ClosedLoopDirectionWithinTwoDegrees) {
  const dynamics::Table table(quiet_table());
  const dynamics::RobotBody body;
  for (double direction : {0.0, 1.0, -2.5}) {
    const auto schedule = plan_straight(direction, 10, nominal_map());
    ASSERT_EQ(schedule.commands.size(), 10u);
    const auto log = dynamics::run_schedule(dynamics::initial_state(table, body), body, table, schedule,
                                            table.period() / 1000.0);
    EXPECT_NEAR(trajectory::wrap_pi(log.total_displacement().angle() - direction), 0.0, 2 * kDeg);
  }
}

TEST(PlanPath, SquareOfFifteenCycleEdges) {
  const auto plan = rectangle_plan(15 * 4.7e-3, 15 * 4.7e-3, 15);
  const auto s = plan_path(plan, 4.7e-3, nominal_map());
  EXPECT_EQ(s.commands.size(), 60u);
  s.validate(60.0 / 115.0);
}

TEST(PlanPath, CyclesDerivedFromLegLength) {
  PathPlan p{{{0, 0}, {0.047, 0}, {0.047, 0.0235}}, std::nullopt};
  EXPECT_EQ(leg_cycles(p, 4.7e-3), (std::vector<int>{10, 5}));
}

TEST(PlanPath, TwoWaypointsEqualPlanStraight) {
  PathPlan p{{{0.01, 0.01}, {0.01, 0.05}}, std::nullopt};
  const auto path = plan_path(p, 4e-3, nominal_map());
  const auto straight = plan_straight(kPi / 2, 10, nominal_map());
  EXPECT_EQ(path, straight);
}

TEST(PlanPath, RejectsShortLegsAndDegeneratePlans) {
  PathPlan p{{{0, 0}, {1e-3, 0}}, std::nullopt};
  EXPECT_THROW((void)plan_path(p, 4.7e-3, nominal_map()), DomainError);
  PathPlan single{{{0, 0}}, std::nullopt};
  EXPECT_THROW((void)plan_path(single, 4.7e-3, nominal_map()), DomainError);
  PathPlan mismatch{{{0, 0}, {0.05, 0}}, std::vector<int>{1, 2}};
  EXPECT_THROW((void)plan_path(mismatch, 4.7e-3, nominal_map()), DomainError);
}

TEST(PlanPath, SquareClosesWithoutNoiseAndDriftsWithIt) {
  const auto& map = nominal_map();
  const double step = map.mean_step();
  const auto schedule = plan_path(rectangle_plan(15 * step, 15 * step, 15), step, map);
  const double perimeter = 60 * step;
  const dynamics::RobotBody body;

  const dynamics::Table quiet(quiet_table());
  const auto clean = dynamics::run_schedule(dynamics::initial_state(quiet, body), body, quiet, schedule,
                                            quiet.period() / 1000.0);
  const double clean_gap = trajectory::closure_error(clean);
  EXPECT_LT(clean_gap, 0.05 * perimeter);

  double noisy_gap = 0.0;
  for (int i = 0; i < 5; ++i) {
    const dynamics::Table noisy(dynamics::TableConfig{}, {0.5 + i, 1.5 + 0.3 * i});
    const auto log = dynamics::run_schedule(dynamics::initial_state(noisy, body), body, noisy, schedule,
                                            noisy.period() / 1000.0);
    noisy_gap += trajectory::closure_error(log) / 5.0;
  }
  EXPECT_GT(noisy_gap, clean_gap);
}
