#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcbot/coil.hpp"
#include "pcbot/config.hpp"
#include "pcbot/dynamics.hpp"
#include "pcbot/execution.hpp"
#include "pcbot/magnetics.hpp"
#include "pcbot/planner.hpp"
#include "pcbot/power.hpp"
#include "pcbot/trajectory.hpp"

namespace pcbot::experiments {

/// Output file name -> contents, ready to be written to the output directory.
using Files = std::map<std::string, std::string>;

struct BistabilityOutcome {
  magnetics::BistabilityReport report;
  std::vector<magnetics::EquilibriumCell> map;
  coil::CoilSpec actuator;
};

BistabilityOutcome run_bistability(const ExperimentConfig& cfg,
                                   Execution exec = Execution::Parallel);
Files render(const ExperimentConfig& cfg, const BistabilityOutcome& out);

struct CoilOutcome {
  coil::OptimizationResult result;
  coil::CoilSpec baseline;
  coil::MagnetCoupling coupling;
  double savings{0.0};
};

CoilOutcome run_coil_optimize(const ExperimentConfig& cfg, Execution exec = Execution::Parallel);
Files render(const ExperimentConfig& cfg, const CoilOutcome& out);

enum class Pattern { Straight, Rect, Custom };

struct RunRecord {
  dynamics::TrajectoryLog log;
  Vec2 displacement;   ///< table frame, first to last cycle start (m)
  Vec2 field_offset;   ///< where this run samples the friction field (m)
  double rpm{0.0};
};

struct SimulationOutcome {
  Pattern pattern{Pattern::Straight};
  control::PhaseDirectionMap calibration;
  dynamics::ActuationSchedule schedule;
  std::vector<int> cycles_per_leg;
  std::vector<Vec2> expected_path;
  std::vector<RunRecord> runs;
  trajectory::Summary summary;
  /// Batch mean of the signed turn at each corner (rad); empty for one leg.
  std::vector<double> mean_turn_angles;
  double mean_closure_error{0.0};  ///< m
};

/// Calibrates on a noise-free copy of the table, plans the pattern, and runs
/// cfg.simulate.repeats independent trials. Each trial samples the shared
/// friction field at its own offset derived from the seed and run index, so
/// results do not depend on `exec`.
SimulationOutcome run_simulate(const ExperimentConfig& cfg, Pattern pattern,
                               const dynamics::ActuationSchedule* custom = nullptr,
                               Execution exec = Execution::Parallel, bool keep_samples = true);
Files render(const ExperimentConfig& cfg, const SimulationOutcome& out);

/// One trial of `schedule` on the table as seen by run `index`.
RunRecord simulate_run(const ExperimentConfig& cfg, const dynamics::ActuationSchedule& schedule,
                       int index, bool keep_samples = true);

/// Friction-field offset and rpm of run `index`.
std::pair<Vec2, double> run_conditions(const ExperimentConfig& cfg, int index);

struct PowerOutcome {
  double coil_resistance{0.0};   ///< actuator coil (ohm)
  double cycle_energy{0.0};      ///< modelled J per cycle
  power::BudgetReport budget;    ///< from the configured cycle energy
  power::BudgetReport modelled;  ///< from the modelled cycle energy
};

PowerOutcome run_power(const ExperimentConfig& cfg);
Files render(const ExperimentConfig& cfg, const PowerOutcome& out);

const char* pattern_name(Pattern p);

}  // namespace pcbot::experiments
