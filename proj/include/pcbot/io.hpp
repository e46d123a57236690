#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "pcbot/coil.hpp"
#include "pcbot/dynamics.hpp"
#include "pcbot/magnetics.hpp"
#include "pcbot/planner.hpp"
#include "pcbot/power.hpp"
#include "pcbot/trajectory.hpp"

namespace pcbot::io {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

// CSV files carry a header row, SI units, LF line endings.

void write_equilibrium_csv(std::ostream& out, const std::vector<magnetics::EquilibriumCell>& cells);
std::vector<magnetics::EquilibriumCell> read_equilibrium_csv(std::istream& in);

/// One row per turn and layer: turn, center_radius_m, width_m, layer, pitch_m.
void write_coil_csv(std::ostream& out, const coil::CoilSpec& coil);
/// Rebuilds the pitches from layer 0; the bounds are not stored in the file.
coil::CoilSpec read_coil_csv(std::istream& in, const coil::CoilBounds& bounds);

void write_calibration_csv(std::ostream& out, const control::PhaseDirectionMap& map);
control::PhaseDirectionMap read_calibration_csv(std::istream& in);

void write_trajectory_csv(std::ostream& out, const std::vector<dynamics::Sample>& samples);
std::vector<dynamics::Sample> read_trajectory_csv(std::istream& in);

void write_cycle_starts_csv(std::ostream& out, const std::vector<dynamics::CycleStart>& starts);
std::vector<dynamics::CycleStart> read_cycle_starts_csv(std::istream& in);

nlohmann::json to_json(const dynamics::ActuationSchedule& s);
dynamics::ActuationSchedule schedule_from_json(const nlohmann::json& j);

nlohmann::json to_json(const trajectory::Summary& s);
trajectory::Summary summary_from_json(const nlohmann::json& j);

nlohmann::json to_json(const power::BudgetReport& r);
power::BudgetReport budget_from_json(const nlohmann::json& j);

nlohmann::json to_json(const magnetics::BistabilityReport& r);
magnetics::BistabilityReport bistability_from_json(const nlohmann::json& j);

/// Two-space indented JSON followed by a newline.
std::string dump(const nlohmann::json& j);

/// Reads a whole file; throws Error if it cannot be opened.
std::string read_file(const std::string& path);
/// Writes `text` verbatim in binary mode; throws Error on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace pcbot::io
