#include "pcbot/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "pcbot/errors.hpp"

namespace pcbot::trajectory {

double wrap_pi(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

Summary summarize(std::span<const Vec2> displacements) {
  Summary s;
  s.runs = static_cast<int>(displacements.size());
  if (displacements.empty()) return s;
  const double n = static_cast<double>(displacements.size());
  for (const auto& d : displacements) {
    s.mean_displacement += d;
    s.mean_distance += d.norm();
  }
  s.mean_displacement *= 1.0 / n;
  s.mean_distance /= n;
  if (displacements.size() < 2) return s;

  const double heading = s.mean_displacement.angle();
  double dir_ss = 0.0;
  double dist_ss = 0.0;
  for (const auto& d : displacements) {
    const double da = wrap_pi(d.angle() - heading);
    const double dr = d.norm() - s.mean_distance;
    dir_ss += da * da;
    dist_ss += dr * dr;
  }
  s.direction_std = std::sqrt(dir_ss / (n - 1.0));
  s.distance_std = std::sqrt(dist_ss / (n - 1.0));
  return s;
}

std::vector<Vec2> leg_displacements(const dynamics::TrajectoryLog& log,
                                    std::span<const int> cycles_per_leg) {
  const auto total = std::accumulate(cycles_per_leg.begin(), cycles_per_leg.end(), 0L);
  if (total + 1 != static_cast<long>(log.cycle_starts.size()))
    throw DomainError("leg_displacements: leg lengths do not match the logged cycles");
  std::vector<Vec2> legs;
  std::size_t at = 0;
  for (int n : cycles_per_leg) {
    if (n < 0) throw DomainError("leg_displacements: negative leg length");
    const std::size_t next = at + static_cast<std::size_t>(n);
    legs.push_back(log.cycle_starts[next].position - log.cycle_starts[at].position);
    at = next;
  }
  return legs;
}

std::vector<double> turn_angles(std::span<const Vec2> legs) {
  std::vector<double> out;
  for (std::size_t i = 1; i < legs.size(); ++i)
    out.push_back(wrap_pi(legs[i].angle() - legs[i - 1].angle()));
  return out;
}

double closure_error(const dynamics::TrajectoryLog& log) {
  return log.total_displacement().norm();
}

}  // namespace pcbot::trajectory
