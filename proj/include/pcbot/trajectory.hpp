#pragma once

#include <span>
#include <vector>

#include "pcbot/dynamics.hpp"
#include "pcbot/vec2.hpp"

namespace pcbot::trajectory {

/// Wraps an angle to (-pi, pi].
double wrap_pi(double a);

/// Spread of a batch of net displacements.
struct Summary {
  int runs{0};
  Vec2 mean_displacement;
  double mean_distance{0.0};   ///< m
  double direction_std{0.0};   ///< rad, sample std of angle about the mean direction
  double distance_std{0.0};    ///< m, sample std of |displacement|
};

Summary summarize(std::span<const Vec2> displacements);

/// Net table-frame displacement of each leg, given the number of cycles per leg.
/// Throws DomainError if the legs do not match the log.
std::vector<Vec2> leg_displacements(const dynamics::TrajectoryLog& log,
                                    std::span<const int> cycles_per_leg);

/// Signed heading change between consecutive legs (rad, counter-clockwise positive).
std::vector<double> turn_angles(std::span<const Vec2> legs);

/// Distance between the first and last cycle-start positions (m).
double closure_error(const dynamics::TrajectoryLog& log);

}  // namespace pcbot::trajectory
