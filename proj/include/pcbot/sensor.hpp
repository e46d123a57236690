#pragma once

#include <random>

namespace pcbot::control {

/// Ambient light sensor behind a polarising film, under a polarised light source.
struct LightSensorModel {
  double polarizer_offset{0.0};  ///< body angle of peak transmission (rad)
  double ambient_floor{0.1};     ///< intensity at crossed polarisers
  double noise_sigma{0.0};       ///< Gaussian noise, fraction of full scale
  double sample_rate{500.0};     ///< Hz

  void validate() const;
};

/// Malus-law intensity with an ambient floor; period pi in body_angle.
/// `rng` is only drawn from when noise_sigma > 0.
double sense_intensity(const LightSensorModel& sensor, double body_angle, std::mt19937_64& rng);

}  // namespace pcbot::control
