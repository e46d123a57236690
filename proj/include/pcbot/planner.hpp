#pragma once

#include <optional>
#include <vector>

#include "pcbot/dynamics.hpp"
#include "pcbot/execution.hpp"
#include "pcbot/vec2.hpp"

namespace pcbot::control {

/// Detach phase to step direction, sampled on a uniform phase grid.
/// Directions are unwrapped and strictly increasing over one revolution.
struct PhaseDirectionMap {
  std::vector<double> phases;      ///< rad, grid over [0, 2 pi)
  std::vector<double> directions;  ///< rad, unwrapped
  std::vector<double> steps;       ///< m per cycle

  /// Periodic linear interpolation of the step direction.
  [[nodiscard]] double direction_at(double phase) const;
  /// Inverse of direction_at, wrapped to [0, 2 pi).
  [[nodiscard]] double phase_for(double direction) const;
  [[nodiscard]] double mean_step() const;
  /// Throws DomainError unless the grid is usable for interpolation.
  void validate() const;
};

struct CalibrationOptions {
  int grid{24};
  double detach_duration{0.1};
  double dt{0.0};  ///< 0 selects period / 1000
  Execution exec{Execution::Parallel};
};

/// Sweeps the detach phase on a uniform table and records one-cycle steps.
/// Throws DomainError if the table has friction noise.
PhaseDirectionMap calibrate_phase_map(const dynamics::RobotBody& body,
                                      const dynamics::TableConfig& table,
                                      const CalibrationOptions& options = {});

dynamics::ActuationSchedule plan_straight(double direction, int n_cycles,
                                          const PhaseDirectionMap& calibration,
                                          double detach_duration = 0.1);

struct PathPlan {
  std::vector<Vec2> waypoints;                  ///< table frame (m)
  std::optional<std::vector<int>> cycles_per_leg;  ///< derived from leg length when empty
};

/// Cycles each leg of `plan` will use.
std::vector<int> leg_cycles(const PathPlan& plan, double per_cycle_step);

/// Open-loop concatenation of straight legs. Throws DomainError on fewer than
/// two waypoints or a leg shorter than one step.
dynamics::ActuationSchedule plan_path(const PathPlan& plan, double per_cycle_step,
                                      const PhaseDirectionMap& calibration,
                                      double detach_duration = 0.1);

/// Closed axis-aligned rectangle starting at the origin, counter-clockwise.
PathPlan rectangle_plan(double width, double height, int cycles_per_edge);

}  // namespace pcbot::control
