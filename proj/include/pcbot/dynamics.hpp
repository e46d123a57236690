#pragma once

#include <cstdint>
#include <vector>

#include "pcbot/vec2.hpp"

namespace pcbot::dynamics {

inline constexpr double kGravity = 9.81;
/// Relative speed below which a re-attaching magnet is clamped to the table.
inline constexpr double kLockSpeed = 1e-3;

struct FrictionNoiseSpec {
  double amplitude{0.15};           ///< peak multiplicative deviation
  double correlation_length{0.03};  ///< lattice spacing of the value noise (m)
  std::uint64_t seed{1};
};

struct TableConfig {
  double rpm{115.0};
  double orbit_radius{10.7e-3};
  double mu_chassis{0.12};
  double mu_rubber_kinetic{0.45};
  double mu_rubber_static{0.67};
  FrictionNoiseSpec friction_noise{};
  double rpm_jitter{0.0};  ///< +/- uniform per-run perturbation (rpm), 0 = off

  [[nodiscard]] double omega() const;
  [[nodiscard]] double period() const;
  void validate() const;
};

/// Smooth multiplicative friction field over the table plane: bilinear value
/// noise with smoothstep weights on a periodic lattice. Values lie in
/// [-amplitude, amplitude].
class FrictionField {
 public:
  explicit FrictionField(const FrictionNoiseSpec& spec);

  [[nodiscard]] double operator()(const Vec2& table_position) const;
  [[nodiscard]] double amplitude() const { return amplitude_; }

  static constexpr int kLatticeSize = 256;

 private:
  double amplitude_;
  double inv_cell_;
  std::vector<double> lattice_;
};

/// An orbital shake table with a friction field, sampled at a fixed offset.
/// The surface displaces by D(t) = R (cos wt - 1, sin wt) from its rest pose;
/// table-frame coordinates are lab coordinates minus D(t).
class Table {
 public:
  explicit Table(const TableConfig& config, Vec2 field_offset = {});

  [[nodiscard]] const TableConfig& config() const { return config_; }
  [[nodiscard]] double omega() const { return omega_; }
  [[nodiscard]] double period() const { return period_; }

  [[nodiscard]] Vec2 surface_displacement(double t) const;
  [[nodiscard]] Vec2 surface_velocity(double t) const;
  [[nodiscard]] double phase(double t) const;
  [[nodiscard]] Vec2 to_table_frame(const Vec2& lab, double t) const;
  /// Friction deviation n at a table-frame point; friction scales by (1 + n).
  [[nodiscard]] double noise_at(const Vec2& table_position) const;

 private:
  TableConfig config_;
  double omega_;
  double period_;
  FrictionField field_;
  Vec2 field_offset_;
};

struct RobotBody {
  double mass{0.018};
  double com_offset{5.2e-3};                ///< CoM distance from magnet axis (m)
  double attached_friction_force{0.073};    ///< rubber kinetic friction (N)
  double detached_friction_force{0.029};    ///< chassis kinetic friction (N)
  double contact_p1_radius{2.0e-3};         ///< inner chassis contact (m)
  double contact_p2_radius{8.0e-3};         ///< outer chassis contact (m)
  double magnet_mass{1.0e-3};

  void validate() const;
};

enum class Attachment { Attached, Detached };

/// Lab-frame robot state. `position`/`velocity` refer to the magnet axis;
/// `body_angle` is the direction from the axis to the centre of mass.
struct RobotState {
  double time{0.0};
  Vec2 position{};
  Vec2 velocity{};
  double body_angle{0.0};   ///< unwrapped (rad)
  double spin_rate{0.0};    ///< rad/s
  Attachment attachment{Attachment::Attached};
  double table_phase{0.0};  ///< omega * time, wrapped to [0, 2 pi)

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct DetachCommand {
  double detach_phase{0.0};     ///< table phase at which the magnet lifts (rad)
  double detach_duration{0.1};  ///< s
  friend bool operator==(const DetachCommand&, const DetachCommand&) = default;
};

struct ActuationSchedule {
  std::vector<DetachCommand> commands;
  /// Throws DomainError unless 0 < duration < period for every command.
  void validate(double period) const;
  friend bool operator==(const ActuationSchedule&, const ActuationSchedule&) = default;
};

Vec2 table_velocity(const TableConfig& table, double t);

/// Attached-state lag of the centre of mass behind the table's inertial
/// force direction, from the balance of drive torque against chassis
/// friction torque. `noise` scales the chassis friction by (1 + noise).
double attached_lag(const RobotBody& body, const TableConfig& table, double noise = 0.0);

/// Attached, co-moving state at time t with the magnet at a table-frame point.
RobotState initial_state(const Table& table, const RobotBody& body, double t = 0.0,
                         Vec2 table_position = {});

Vec2 center_of_mass(const RobotState& s, const RobotBody& body);
Vec2 center_of_mass_velocity(const RobotState& s, const RobotBody& body);

/// One semi-implicit Euler step. Requires dt <= period / 200.
RobotState step(const RobotState& state, const RobotBody& body, const Table& table, double dt);

struct Sample {
  double t{0.0};
  RobotState state;
  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Receives every `stride`-th integrator state. nullptr disables recording.
struct SampleSink {
  std::vector<Sample>* out{nullptr};
  int stride{1};
  long counter{0};
  void offer(const RobotState& s);
};

struct CycleResult {
  RobotState state;
  Vec2 displacement;  ///< table-frame magnet displacement over the cycle
};

/// Waits attached until the table reaches `cmd.detach_phase`, detaches for
/// `cmd.detach_duration`, then re-attaches until one full period after the
/// detach moment.
CycleResult run_cycle(const RobotState& state, const RobotBody& body, const Table& table,
                      const DetachCommand& cmd, double dt, SampleSink* sink = nullptr);

struct CycleStart {
  int cycle{0};
  Vec2 position;  ///< table frame (m)
  friend bool operator==(const CycleStart&, const CycleStart&) = default;
};

struct TrajectoryLog {
  std::vector<CycleStart> cycle_starts;
  std::vector<Sample> samples;

  [[nodiscard]] Vec2 total_displacement() const;
};

TrajectoryLog run_schedule(const RobotState& state, const RobotBody& body, const Table& table,
                           const ActuationSchedule& schedule, double dt, int sample_stride = 1);

struct SpinReport {
  double drive_torque{0.0};     ///< N m
  double friction_torque{0.0};  ///< N m
  bool spins{false};
  bool slips{false};
};

SpinReport spin_feasibility(const RobotBody& body, const TableConfig& table);

}  // namespace pcbot::dynamics
