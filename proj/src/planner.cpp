#include "pcbot/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pcbot/errors.hpp"

namespace pcbot::control {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

// Nearest representative of `a` modulo 2 pi to `ref`.
double unwrap_near(double a, double ref) {
  return a + kTwoPi * std::round((ref - a) / kTwoPi);
}

}  // namespace

void PhaseDirectionMap::validate() const {
  const std::size_t n = phases.size();
  if (n < 2 || directions.size() != n || steps.size() != n)
    throw DomainError("phase map: need at least two consistent grid points");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(phases[i] > phases[i - 1])) throw DomainError("phase map: phases not increasing");
    if (!(directions[i] > directions[i - 1]))
      throw DomainError("phase map: direction is not monotone in phase");
  }
  if (!(phases.front() >= 0.0 && phases.back() < kTwoPi))
    throw DomainError("phase map: phases must lie in [0, 2 pi)");
  if (!(directions.back() < directions.front() + kTwoPi))
    throw DomainError("phase map: direction wraps more than once per revolution");
}

double PhaseDirectionMap::direction_at(double phase) const {
  const double p = wrap_two_pi(phase);
  // Find the segment [phases[i], phases[i+1]] containing p, with wrap-around.
  auto it = std::upper_bound(phases.begin(), phases.end(), p);
  double p0, p1, d0, d1;
  if (it == phases.begin() || it == phases.end()) {
    p0 = phases.back();
    d0 = directions.back();
    p1 = phases.front() + kTwoPi;
    d1 = directions.front() + kTwoPi;
  } else {
    const auto i = static_cast<std::size_t>(it - phases.begin()) - 1;
    p0 = phases[i];
    d0 = directions[i];
    p1 = phases[i + 1];
    d1 = directions[i + 1];
  }
  double q = p;
  if (q < p0) q += kTwoPi;
  return d0 + (d1 - d0) * (q - p0) / (p1 - p0);
}

double PhaseDirectionMap::phase_for(double direction) const {
  const std::size_t n = phases.size();
  // Bring the target into [directions[0], directions[0] + 2 pi).
  double d = directions.front() + wrap_two_pi(direction - directions.front());
  for (std::size_t i = 0; i < n; ++i) {
    const double d0 = directions[i];
    const double d1 = i + 1 < n ? directions[i + 1] : directions.front() + kTwoPi;
    const double p0 = phases[i];
    const double p1 = i + 1 < n ? phases[i + 1] : phases.front() + kTwoPi;
    if (d >= d0 && d <= d1) return wrap_two_pi(p0 + (p1 - p0) * (d - d0) / (d1 - d0));
  }
  return wrap_two_pi(phases.back());
}

double PhaseDirectionMap::mean_step() const {
  if (steps.empty()) return 0.0;
  double s = 0.0;
  for (double x : steps) s += x;
  return s / static_cast<double>(steps.size());
}

PhaseDirectionMap calibrate_phase_map(const dynamics::RobotBody& body,
                                      const dynamics::TableConfig& table_cfg,
                                      const CalibrationOptions& options) {
  if (table_cfg.friction_noise.amplitude != 0.0)
    throw DomainError("calibrate_phase_map: table must be noise-free");
  if (options.grid < 2) throw DomainError("calibrate_phase_map: grid needs at least 2 phases");
  const dynamics::Table table(table_cfg);
  const double dt = options.dt > 0.0 ? options.dt : table.period() / 1000.0;
  const dynamics::RobotState start = dynamics::initial_state(table, body);

  const int n = options.grid;
  PhaseDirectionMap map;
  map.phases.resize(n);
  map.directions.resize(n);
  map.steps.resize(n);
  auto measure = [&](int i) {
    const double phase = kTwoPi * i / n;
    const auto r = dynamics::run_cycle(start, body, table, {phase, options.detach_duration}, dt);
    map.phases[i] = phase;
    map.directions[i] = r.displacement.angle();
    map.steps[i] = r.displacement.norm();
  };
  if (options.exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) measure(i);
  } else {
    for (int i = 0; i < n; ++i) measure(i);
  }
  for (int i = 1; i < n; ++i)
    map.directions[i] = unwrap_near(map.directions[i], map.directions[i - 1]);
  map.validate();
  return map;
}

dynamics::ActuationSchedule plan_straight(double direction, int n_cycles,
                                          const PhaseDirectionMap& calibration,
                                          double detach_duration) {
  dynamics::ActuationSchedule s;
  if (n_cycles <= 0) return s;
  const double phase = calibration.phase_for(direction);
  s.commands.assign(static_cast<std::size_t>(n_cycles), {phase, detach_duration});
  return s;
}

std::vector<int> leg_cycles(const PathPlan& plan, double per_cycle_step) {
  if (plan.waypoints.size() < 2) throw DomainError("plan_path: need at least two waypoints");
  if (!(per_cycle_step > 0.0)) throw DomainError("plan_path: per-cycle step must be positive");
  const std::size_t legs = plan.waypoints.size() - 1;
  if (plan.cycles_per_leg && plan.cycles_per_leg->size() != legs)
    throw DomainError("plan_path: cycles_per_leg must have one entry per leg");
  std::vector<int> out;
  for (std::size_t i = 0; i < legs; ++i) {
    const double length = (plan.waypoints[i + 1] - plan.waypoints[i]).norm();
    if (length < per_cycle_step) {
      std::ostringstream msg;
      msg << "plan_path: leg " << i << " is " << length << " m, shorter than one "
          << per_cycle_step << " m step";
      throw DomainError(msg.str());
    }
    const int n = plan.cycles_per_leg ? (*plan.cycles_per_leg)[i]
                                      : static_cast<int>(std::lround(length / per_cycle_step));
    if (n < 1) throw DomainError("plan_path: every leg needs at least one cycle");
    out.push_back(n);
  }
  return out;
}

dynamics::ActuationSchedule plan_path(const PathPlan& plan, double per_cycle_step,
                                      const PhaseDirectionMap& calibration,
                                      double detach_duration) {
  const auto cycles = leg_cycles(plan, per_cycle_step);
  dynamics::ActuationSchedule s;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const Vec2 leg = plan.waypoints[i + 1] - plan.waypoints[i];
    const auto part = plan_straight(leg.angle(), cycles[i], calibration, detach_duration);
    s.commands.insert(s.commands.end(), part.commands.begin(), part.commands.end());
  }
  return s;
}

PathPlan rectangle_plan(double width, double height, int cycles_per_edge) {
  PathPlan p;
  p.waypoints = {{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}, {0.0, 0.0}};
  p.cycles_per_leg = std::vector<int>(4, cycles_per_edge);
  return p;
}

}  // namespace pcbot::control
