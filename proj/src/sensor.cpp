#include "pcbot/sensor.hpp"

#include <cmath>

#include "pcbot/errors.hpp"

namespace pcbot::control {

void LightSensorModel::validate() const {
  if (!(ambient_floor >= 0.0 && ambient_floor < 1.0))
    throw ConfigError("sensor: ambient_floor must lie in [0, 1)");
  if (!(noise_sigma >= 0.0)) throw ConfigError("sensor: noise_sigma must be non-negative");
  if (!(sample_rate > 0.0)) throw ConfigError("sensor: sample_rate must be positive");
}

double sense_intensity(const LightSensorModel& sensor, double body_angle, std::mt19937_64& rng) {
  const double c = std::cos(body_angle - sensor.polarizer_offset);
  double v = sensor.ambient_floor + (1.0 - sensor.ambient_floor) * c * c;
  if (sensor.noise_sigma > 0.0) v += std::normal_distribution<double>(0.0, sensor.noise_sigma)(rng);
  return v;
}

}  // namespace pcbot::control
