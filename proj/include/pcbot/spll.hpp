#pragma once

#include <deque>
#include <utility>

namespace pcbot::control {

struct SpllConfig {
  double polarizer_offset{0.0};  ///< must match the sensor (rad)
  double kp{0.3};
  double ki{0.05};
  double lock_tolerance{0.17453292519943295};  ///< 10 deg
  int lock_count{3};
  double threshold_fraction{0.5};
  double window_rotations{2.0};
  double initial_window{2.4};  ///< s, two rotations at 50 rpm
  double warmup{1.2};          ///< s before the first crossing is trusted
};

struct SpllState {
  double phase_estimate{0.0};      ///< body angle at last_crossing, defined modulo pi (rad)
  double frequency_estimate{0.0};  ///< spin rate (rad/s), 0 until two crossings
  bool locked{false};
  double threshold{0.0};           ///< raw intensity threshold in use
  double last_crossing{0.0};       ///< s
};

/// Threshold-crossing software PLL on the polarised intensity signal.
/// Assumes positive spin; tracks orientation modulo pi. The window min/max
/// normalisation makes the output invariant under positive affine maps of
/// the intensity.
class SoftwarePll {
 public:
  explicit SoftwarePll(SpllConfig config = {});

  const SpllState& update(double sample, double t);

  [[nodiscard]] const SpllState& state() const { return state_; }
  /// Extrapolated body angle at time t (rad, modulo pi). Meaningless before
  /// the first crossing.
  [[nodiscard]] double phase_at(double t) const;
  [[nodiscard]] int crossings() const { return crossings_; }

 private:
  void push_window(double t, double v);
  void on_crossing(double tc);

  SpllConfig config_;
  SpllState state_;
  std::deque<std::pair<double, double>> max_q_;
  std::deque<std::pair<double, double>> min_q_;
  double first_t_{0.0};
  bool have_sample_{false};
  double prev_t_{0.0};
  double prev_v_{0.0};
  int crossings_{0};
  int good_streak_{0};
  double integral_{0.0};
};

}  // namespace pcbot::control
