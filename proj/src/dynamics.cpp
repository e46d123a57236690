#include "pcbot/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pcbot/errors.hpp"

namespace pcbot::dynamics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

// Coulomb friction impulse against the relative velocity the body would have
// after coasting for dt. Sticks when the impulse can cancel it.
Vec2 apply_kinetic_friction(const Vec2& velocity, const Vec2& surface_velocity,
                            double decel, double dt) {
  const Vec2 u = velocity - surface_velocity;
  const double speed = u.norm();
  if (speed <= decel * dt) return surface_velocity;
  return velocity - u * (decel * dt / speed);
}

// Advances `s` by `duration` in equal sub-steps no longer than dt.
void advance(RobotState& s, double duration, const RobotBody& body, const Table& table,
             double dt, SampleSink* sink) {
  if (!(duration > 0.0)) return;
  const auto n = static_cast<long>(std::ceil(duration / dt - 1e-9));
  const double h = duration / static_cast<double>(std::max(1L, n));
  for (long i = 0; i < std::max(1L, n); ++i) {
    s = step(s, body, table, h);
    if (sink) sink->offer(s);
  }
}

}  // namespace

double TableConfig::omega() const { return kTwoPi * rpm / 60.0; }
double TableConfig::period() const { return 60.0 / rpm; }

void TableConfig::validate() const {
  if (!(rpm > 0.0)) throw ConfigError("table: rpm must be positive");
  if (!(orbit_radius > 0.0)) throw ConfigError("table: orbit_radius must be positive");
  if (!(mu_chassis > 0.0 && mu_chassis < mu_rubber_kinetic &&
        mu_rubber_kinetic <= mu_rubber_static))
    throw ConfigError("table: need 0 < mu_chassis < mu_rubber_kinetic <= mu_rubber_static");
  if (!(rpm_jitter >= 0.0 && rpm_jitter < rpm))
    throw ConfigError("table: rpm_jitter must lie in [0, rpm)");
}

Table::Table(const TableConfig& config, Vec2 field_offset)
    : config_(config),
      omega_(config.omega()),
      period_(config.period()),
      field_(config.friction_noise),
      field_offset_(field_offset) {}

Vec2 Table::surface_displacement(double t) const {
  const double a = omega_ * t;
  return {config_.orbit_radius * (std::cos(a) - 1.0), config_.orbit_radius * std::sin(a)};
}

Vec2 Table::surface_velocity(double t) const {
  return Vec2::tangent(omega_ * t) * (config_.orbit_radius * omega_);
}

double Table::phase(double t) const { return wrap_two_pi(omega_ * t); }

Vec2 Table::to_table_frame(const Vec2& lab, double t) const {
  return lab - surface_displacement(t);
}

double Table::noise_at(const Vec2& table_position) const {
  return field_(table_position + field_offset_);
}

void RobotBody::validate() const {
  if (!(mass > 0.0)) throw ConfigError("body: mass must be positive");
  if (!(com_offset > 0.0)) throw ConfigError("body: com_offset must be positive");
  if (!(attached_friction_force > detached_friction_force && detached_friction_force > 0.0))
    throw ConfigError("body: need attached_friction_force > detached_friction_force > 0");
  if (!(contact_p1_radius >= 0.0 && contact_p2_radius >= contact_p1_radius))
    throw ConfigError("body: need 0 <= contact_p1_radius <= contact_p2_radius");
  if (!(magnet_mass >= 0.0 && magnet_mass < mass))
    throw ConfigError("body: magnet_mass must lie in [0, mass)");
}

void ActuationSchedule::validate(double period) const {
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const double tau = commands[i].detach_duration;
    if (!(tau > 0.0 && tau < period)) {
      std::ostringstream msg;
      msg << "schedule command " << i << ": detach_duration " << tau
          << " s must lie in (0, " << period << ")";
      throw DomainError(msg.str());
    }
  }
}

Vec2 table_velocity(const TableConfig& table, double t) {
  const double w = table.omega();
  return Vec2::tangent(w * t) * (table.orbit_radius * w);
}

double attached_lag(const RobotBody& body, const TableConfig& table, double noise) {
  const SpinReport nominal = spin_feasibility(body, table);
  if (!(nominal.drive_torque > 0.0)) return 0.5 * std::numbers::pi;
  const double ratio = nominal.friction_torque * (1.0 + noise) / nominal.drive_torque;
  return std::asin(std::clamp(ratio, 0.0, 1.0));
}

RobotState initial_state(const Table& table, const RobotBody& body, double t,
                         Vec2 table_position) {
  RobotState s;
  s.time = t;
  s.position = table_position + table.surface_displacement(t);
  s.velocity = table.surface_velocity(t);
  s.spin_rate = table.omega();
  s.attachment = Attachment::Attached;
  s.table_phase = table.phase(t);
  s.body_angle = table.omega() * t -
                 attached_lag(body, table.config(), table.noise_at(table_position));
  return s;
}

Vec2 center_of_mass(const RobotState& s, const RobotBody& body) {
  return s.position + Vec2::polar(s.body_angle) * body.com_offset;
}

Vec2 center_of_mass_velocity(const RobotState& s, const RobotBody& body) {
  return s.velocity + Vec2::tangent(s.body_angle) * (s.spin_rate * body.com_offset);
}

RobotState step(const RobotState& s, const RobotBody& body, const Table& table, double dt) {
  if (!(dt > 0.0) || dt > table.period() / 200.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "step: dt = " << dt << " s must lie in (0, period/200]";
    throw DomainError(msg.str());
  }
  const double t1 = s.time + dt;
  const Vec2 surface_v1 = table.surface_velocity(t1);
  const double noise = table.noise_at(table.to_table_frame(s.position, s.time));

  RobotState n = s;
  n.time = t1;
  n.table_phase = table.phase(t1);

  if (s.attachment == Attachment::Attached) {
    const Vec2 slip = s.velocity - table.surface_velocity(s.time);
    if (slip.norm() < kLockSpeed) {
      // Magnet co-moves with the table; the body hangs at its friction lag.
      n.position = s.position + table.surface_displacement(t1) -
                   table.surface_displacement(s.time);
      n.velocity = surface_v1;
      n.spin_rate = table.omega();
      const double target =
          table.omega() * t1 - attached_lag(body, table.config(), noise);
      const double guess = s.body_angle + n.spin_rate * dt;
      n.body_angle = target + kTwoPi * std::round((guess - target) / kTwoPi);
    } else {
      // Re-attachment transient: rubber kinetic friction on the magnet.
      const double decel = body.attached_friction_force * (1.0 + noise) / body.mass;
      Vec2 v = apply_kinetic_friction(s.velocity, surface_v1, decel, dt);
      if ((v - surface_v1).norm() < kLockSpeed) v = surface_v1;
      n.velocity = v;
      n.position = s.position + v * dt;
      n.body_angle = s.body_angle + s.spin_rate * dt;
    }
    return n;
  }

  // Detached: the chassis slides; friction acts on the centre of mass while
  // the body keeps spinning at its last attached rate.
  const double decel = body.detached_friction_force * (1.0 + noise) / body.mass;
  Vec2 com_v = apply_kinetic_friction(center_of_mass_velocity(s, body), surface_v1, decel, dt);
  const Vec2 com = center_of_mass(s, body) + com_v * dt;
  n.body_angle = s.body_angle + s.spin_rate * dt;
  n.position = com - Vec2::polar(n.body_angle) * body.com_offset;
  n.velocity = com_v - Vec2::tangent(n.body_angle) * (s.spin_rate * body.com_offset);
  return n;
}

void SampleSink::offer(const RobotState& s) {
  if (out && counter++ % std::max(1, stride) == 0) out->push_back(Sample{s.time, s});
}

CycleResult run_cycle(const RobotState& state, const RobotBody& body, const Table& table,
                      const DetachCommand& cmd, double dt, SampleSink* sink) {
  const double period = table.period();
  if (!(cmd.detach_duration > 0.0 && cmd.detach_duration < period))
    throw DomainError("run_cycle: detach_duration must lie in (0, period)");

  RobotState s = state;
  const Vec2 start = table.to_table_frame(s.position, s.time);

  double wait = wrap_two_pi(cmd.detach_phase - s.table_phase) / table.omega();
  if (wait >= period * (1.0 - 1e-9)) wait = 0.0;
  advance(s, wait, body, table, dt, sink);

  s.attachment = Attachment::Detached;
  advance(s, cmd.detach_duration, body, table, dt, sink);
  s.attachment = Attachment::Attached;
  advance(s, period - cmd.detach_duration, body, table, dt, sink);

  return {s, table.to_table_frame(s.position, s.time) - start};
}

Vec2 TrajectoryLog::total_displacement() const {
  if (cycle_starts.empty()) return {};
  return cycle_starts.back().position - cycle_starts.front().position;
}

TrajectoryLog run_schedule(const RobotState& state, const RobotBody& body, const Table& table,
                           const ActuationSchedule& schedule, double dt, int sample_stride) {
  schedule.validate(table.period());
  TrajectoryLog log;
  SampleSink sink{&log.samples, sample_stride, 0};
  RobotState s = state;
  sink.offer(s);
  log.cycle_starts.push_back({0, table.to_table_frame(s.position, s.time)});
  int index = 0;
  for (const auto& cmd : schedule.commands) {
    s = run_cycle(s, body, table, cmd, dt, &sink).state;
    log.cycle_starts.push_back({++index, table.to_table_frame(s.position, s.time)});
  }
  return log;
}

SpinReport spin_feasibility(const RobotBody& body, const TableConfig& table) {
  const double w = table.omega();
  const double inertial_force = body.mass * table.orbit_radius * w * w;
  SpinReport r;
  r.drive_torque = inertial_force * body.com_offset;
  const double lever = 0.5 * (body.contact_p1_radius + body.contact_p2_radius);
  r.friction_torque =
      table.mu_chassis * (body.mass - body.magnet_mass) * kGravity * lever;
  r.spins = r.drive_torque > r.friction_torque;
  const double magnet_normal = body.attached_friction_force / table.mu_rubber_kinetic;
  r.slips = inertial_force > table.mu_rubber_static * magnet_normal;
  return r;
}

}  // namespace pcbot::dynamics
