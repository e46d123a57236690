#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcbot/coil.hpp"
#include "pcbot/dynamics.hpp"
#include "pcbot/magnetics.hpp"
#include "pcbot/power.hpp"
#include "pcbot/sensor.hpp"

namespace pcbot {

struct BistabilitySweep {
  double d_min{5.0e-3};
  double d_max{10.0e-3};
  int d_steps{11};
  std::vector<double> currents{-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5};

  [[nodiscard]] std::vector<double> ds() const;
};

struct CoilSection {
  coil::CoilBounds bounds;
  coil::CircuitConfig circuit;
  coil::OptimizerOptions optimizer;
  std::vector<double> layer_depths{0.0, 0.2e-3, 1.4e-3, 1.6e-3};
  double converter_efficiency{0.8};
  /// Coil fitted to the actuator: explicit pitches, or a simple spiral of this width.
  double actuator_width{0.7e-3};
  std::vector<double> actuator_pitches;

  [[nodiscard]] coil::CoilSpec actuator_coil() const;
};

struct SimulationSettings {
  int repeats{30};
  int cycles{10};
  double detach_duration{0.1};   ///< s
  double direction{0.0};         ///< rad, straight runs
  double dt_fraction{1e-3};      ///< integrator step as a fraction of the table period
  int sample_stride{10};
  int rect_cycles_per_edge{15};
  int calibration_grid{24};
};

struct ExperimentConfig {
  magnetics::SolenoidConfig solenoid;
  magnetics::CalibrationTargets calibration;
  /// Set when the surrogate coefficients were fitted rather than given.
  std::optional<magnetics::CalibrationResult> surrogate_fit;
  BistabilitySweep bistability;
  CoilSection coil;
  dynamics::TableConfig table;
  dynamics::RobotBody body;
  control::LightSensorModel sensor;
  power::PowerConfig power;
  SimulationSettings simulate;
  std::uint64_t seed{1};
  std::string output_dir{"out"};

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Sets the experiment seed and every seed derived from it.
void apply_seed(ExperimentConfig& cfg, std::uint64_t seed);

/// Built-in defaults with the surrogate fitted to the calibration targets.
ExperimentConfig default_config();

/// Reads a config file. Unknown sections or keys are errors. Missing
/// a_core/a_plate are fitted; a failed fit throws CalibrationError.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

}  // namespace pcbot
