#include "pcbot/spll.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pcbot::control {

namespace {

// Wraps to [-pi/2, pi/2): the signal cannot tell theta from theta + pi.
double wrap_half_pi(double a) {
  constexpr double pi = std::numbers::pi;
  return a - pi * std::floor(a / pi + 0.5);
}

}  // namespace

SoftwarePll::SoftwarePll(SpllConfig config) : config_(config) {}

double SoftwarePll::phase_at(double t) const {
  return state_.phase_estimate + state_.frequency_estimate * (t - state_.last_crossing);
}

void SoftwarePll::push_window(double t, double v) {
  while (!max_q_.empty() && max_q_.back().second <= v) max_q_.pop_back();
  max_q_.emplace_back(t, v);
  while (!min_q_.empty() && min_q_.back().second >= v) min_q_.pop_back();
  min_q_.emplace_back(t, v);

  double window = config_.initial_window;
  if (state_.frequency_estimate > 0.0)
    window = config_.window_rotations * 2.0 * std::numbers::pi / state_.frequency_estimate;
  while (max_q_.front().first < t - window) max_q_.pop_front();
  while (min_q_.front().first < t - window) min_q_.pop_front();
}

const SpllState& SoftwarePll::update(double sample, double t) {
  if (!have_sample_) {
    have_sample_ = true;
    first_t_ = t;
  }
  push_window(t, sample);
  const double lo = min_q_.front().second;
  const double hi = max_q_.front().second;
  const double range = hi - lo;
  state_.threshold = lo + config_.threshold_fraction * range;

  // A flat window carries no phase information.
  const bool usable = range > 1e-9 * std::max(std::abs(hi), std::abs(lo)) && range > 0.0;
  if (usable && t - first_t_ >= config_.warmup && prev_v_ < state_.threshold &&
      sample >= state_.threshold) {
    const double frac = (state_.threshold - prev_v_) / (sample - prev_v_);
    on_crossing(prev_t_ + frac * (t - prev_t_));
  }
  prev_t_ = t;
  prev_v_ = sample;
  return state_;
}

void SoftwarePll::on_crossing(double tc) {
  constexpr double pi = std::numbers::pi;
  // Upward 50% crossing of cos^2(theta - offset) happens at theta - offset = -pi/4.
  const double observed = config_.polarizer_offset - 0.25 * pi;
  ++crossings_;

  if (crossings_ == 1) {
    state_.phase_estimate = observed;
    state_.last_crossing = tc;
    return;
  }

  const double interval = tc - state_.last_crossing;
  if (!(interval > 0.0)) return;
  const double measured = pi / interval;
  const double predicted = state_.phase_estimate +
                           (state_.frequency_estimate > 0.0 ? state_.frequency_estimate : measured) *
                               interval;
  state_.frequency_estimate = state_.frequency_estimate > 0.0
                                  ? 0.5 * (state_.frequency_estimate + measured)
                                  : measured;

  const double error = wrap_half_pi(observed - predicted);
  integral_ += error;
  state_.phase_estimate = predicted + config_.kp * error + config_.ki * integral_;
  state_.last_crossing = tc;

  good_streak_ = std::abs(error) < config_.lock_tolerance ? good_streak_ + 1 : 0;
  state_.locked = good_streak_ >= config_.lock_count;
}

}  // namespace pcbot::control
