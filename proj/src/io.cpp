#include "pcbot/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pcbot/errors.hpp"

namespace pcbot::io {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("csv: invalid number '" + s + "'");
  return v;
}

long parse_integer(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("csv: invalid integer '" + s + "'");
  return v;
}

// Reads the header, checks it, and returns the data rows split into fields.
std::vector<std::vector<std::string>> read_rows(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || split(line) != split(header))
    throw Error("csv: expected header '" + header + "'");
  const std::size_t width = split(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != width) throw Error("csv: wrong field count in '" + line + "'");
    rows.push_back(std::move(fields));
  }
  return rows;
}

void row(std::ostream& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out << ',';
    out << f;
    first = false;
  }
  out << '\n';
}

std::string num(double v) { return format_number(v); }
std::string num(long v) { return std::to_string(v); }

constexpr const char* kEquilibriumHeader = "d_m,i_a,h_eq_m,exists";
constexpr const char* kCoilHeader = "turn,center_radius_m,width_m,layer,pitch_m";
constexpr const char* kCalibrationHeader = "phase_rad,direction_rad,step_m";
constexpr const char* kTrajectoryHeader = "t,x,y,vx,vy,angle,spin,attached,table_phase";
constexpr const char* kCycleHeader = "cycle,x_m,y_m";

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_number: conversion failed");
  return std::string(buf, ptr);
}

void write_equilibrium_csv(std::ostream& out, const std::vector<magnetics::EquilibriumCell>& cells) {
  out << kEquilibriumHeader << '\n';
  for (const auto& c : cells)
    row(out, {num(c.d), num(c.current), c.h_eq ? num(*c.h_eq) : "", c.h_eq ? "1" : "0"});
}

std::vector<magnetics::EquilibriumCell> read_equilibrium_csv(std::istream& in) {
  std::vector<magnetics::EquilibriumCell> cells;
  for (const auto& f : read_rows(in, kEquilibriumHeader)) {
    magnetics::EquilibriumCell c{parse_number(f[0]), parse_number(f[1]), std::nullopt};
    if (f[3] == "1") {
      c.h_eq = parse_number(f[2]);
    } else if (f[3] != "0" || !f[2].empty()) {
      throw Error("csv: inconsistent equilibrium row");
    }
    cells.push_back(c);
  }
  return cells;
}

void write_coil_csv(std::ostream& out, const coil::CoilSpec& coil) {
  out << kCoilHeader << '\n';
  const auto radii = coil.center_radii();
  for (int layer = 0; layer < coil.bounds.layers; ++layer)
    for (std::size_t k = 0; k < coil.turns(); ++k)
      row(out, {num(static_cast<long>(k)), num(radii[k]), num(coil.width(k)), num(long{layer}),
                num(coil.pitches[k])});
}

coil::CoilSpec read_coil_csv(std::istream& in, const coil::CoilBounds& bounds) {
  coil::CoilSpec coil{bounds, {}};
  const auto rows = read_rows(in, kCoilHeader);
  for (const auto& f : rows) {
    const long turn = parse_integer(f[0]);
    const long layer = parse_integer(f[3]);
    if (layer < 0 || layer >= bounds.layers) throw Error("csv: coil layer out of range");
    if (layer == 0) {
      if (turn != static_cast<long>(coil.pitches.size())) throw Error("csv: coil turns out of order");
      coil.pitches.push_back(parse_number(f[4]));
    }
  }
  if (rows.size() != coil.pitches.size() * static_cast<std::size_t>(bounds.layers))
    throw Error("csv: coil layers do not all carry the same turns");
  for (const auto& f : rows) {
    const auto turn = static_cast<std::size_t>(parse_integer(f[0]));
    if (turn >= coil.pitches.size() || parse_number(f[4]) != coil.pitches[turn])
      throw Error("csv: coil layers disagree on turn pitches");
  }
  return coil;
}

void write_calibration_csv(std::ostream& out, const control::PhaseDirectionMap& map) {
  out << kCalibrationHeader << '\n';
  for (std::size_t i = 0; i < map.phases.size(); ++i)
    row(out, {num(map.phases[i]), num(map.directions[i]), num(map.steps[i])});
}

control::PhaseDirectionMap read_calibration_csv(std::istream& in) {
  control::PhaseDirectionMap map;
  for (const auto& f : read_rows(in, kCalibrationHeader)) {
    map.phases.push_back(parse_number(f[0]));
    map.directions.push_back(parse_number(f[1]));
    map.steps.push_back(parse_number(f[2]));
  }
  return map;
}

void write_trajectory_csv(std::ostream& out, const std::vector<dynamics::Sample>& samples) {
  out << kTrajectoryHeader << '\n';
  for (const auto& s : samples) {
    const auto& st = s.state;
    row(out, {num(s.t), num(st.position.x), num(st.position.y), num(st.velocity.x),
              num(st.velocity.y), num(st.body_angle), num(st.spin_rate),
              st.attachment == dynamics::Attachment::Attached ? "1" : "0", num(st.table_phase)});
  }
}

std::vector<dynamics::Sample> read_trajectory_csv(std::istream& in) {
  std::vector<dynamics::Sample> out;
  for (const auto& f : read_rows(in, kTrajectoryHeader)) {
    dynamics::Sample s;
    s.t = parse_number(f[0]);
    auto& st = s.state;
    st.time = s.t;
    st.position = {parse_number(f[1]), parse_number(f[2])};
    st.velocity = {parse_number(f[3]), parse_number(f[4])};
    st.body_angle = parse_number(f[5]);
    st.spin_rate = parse_number(f[6]);
    if (f[7] != "0" && f[7] != "1") throw Error("csv: attached flag must be 0 or 1");
    st.attachment = f[7] == "1" ? dynamics::Attachment::Attached : dynamics::Attachment::Detached;
    st.table_phase = parse_number(f[8]);
    out.push_back(s);
  }
  return out;
}

void write_cycle_starts_csv(std::ostream& out, const std::vector<dynamics::CycleStart>& starts) {
  out << kCycleHeader << '\n';
  for (const auto& c : starts)
    row(out, {num(long{c.cycle}), num(c.position.x), num(c.position.y)});
}

std::vector<dynamics::CycleStart> read_cycle_starts_csv(std::istream& in) {
  std::vector<dynamics::CycleStart> out;
  for (const auto& f : read_rows(in, kCycleHeader))
    out.push_back({static_cast<int>(parse_integer(f[0])), {parse_number(f[1]), parse_number(f[2])}});
  return out;
}

json to_json(const dynamics::ActuationSchedule& s) {
  json commands = json::array();
  for (const auto& c : s.commands)
    commands.push_back({{"detach_phase", c.detach_phase}, {"detach_duration", c.detach_duration}});
  return commands;
}

dynamics::ActuationSchedule schedule_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("schedule: expected a JSON list of commands");
  dynamics::ActuationSchedule s;
  for (const auto& c : j) {
    if (!c.is_object() || !c.contains("detach_phase") || !c.contains("detach_duration"))
      throw ConfigError("schedule: each command needs detach_phase and detach_duration");
    s.commands.push_back({c.at("detach_phase").get<double>(), c.at("detach_duration").get<double>()});
  }
  return s;
}

json to_json(const trajectory::Summary& s) {
  return {{"runs", s.runs},
          {"mean_displacement_m", {s.mean_displacement.x, s.mean_displacement.y}},
          {"mean_distance_m", s.mean_distance},
          {"direction_std_rad", s.direction_std},
          {"distance_std_m", s.distance_std}};
}

trajectory::Summary summary_from_json(const json& j) {
  trajectory::Summary s;
  s.runs = j.at("runs").get<int>();
  s.mean_displacement = {j.at("mean_displacement_m").at(0).get<double>(),
                         j.at("mean_displacement_m").at(1).get<double>()};
  s.mean_distance = j.at("mean_distance_m").get<double>();
  s.direction_std = j.at("direction_std_rad").get<double>();
  s.distance_std = j.at("distance_std_m").get<double>();
  return s;
}

json to_json(const power::BudgetReport& r) {
  return {{"battery_energy_j", r.battery_energy},
          {"actuation_cycles", r.actuation_cycles},
          {"range_m", r.range},
          {"cycles_with_idle", r.cycles_with_idle},
          {"range_with_idle_m", r.range_with_idle},
          {"runtime_s", r.runtime}};
}

power::BudgetReport budget_from_json(const json& j) {
  power::BudgetReport r;
  r.battery_energy = j.at("battery_energy_j").get<double>();
  r.actuation_cycles = j.at("actuation_cycles").get<long>();
  r.range = j.at("range_m").get<double>();
  r.cycles_with_idle = j.at("cycles_with_idle").get<long>();
  r.range_with_idle = j.at("range_with_idle_m").get<double>();
  r.runtime = j.at("runtime_s").get<double>();
  return r;
}

json to_json(const magnetics::BistabilityReport& r) {
  return {{"ordering_holds", r.ordering_holds},
          {"margins_m",
           {{"h_a_minus_h_eq_pos", r.margins[0]},
            {"h_eq_zero_minus_h_a", r.margins[1]},
            {"h_d_minus_h_eq_zero", r.margins[2]},
            {"h_eq_neg_minus_h_d", r.margins[3]}}},
          {"min_margin_m", r.min_margin()},
          {"h_eq_positive_m", r.h_eq_positive},
          {"h_eq_zero_m", r.h_eq_zero},
          {"h_eq_negative_m", r.h_eq_negative}};
}

magnetics::BistabilityReport bistability_from_json(const json& j) {
  magnetics::BistabilityReport r;
  r.ordering_holds = j.at("ordering_holds").get<bool>();
  const auto& m = j.at("margins_m");
  r.margins = {m.at("h_a_minus_h_eq_pos").get<double>(), m.at("h_eq_zero_minus_h_a").get<double>(),
               m.at("h_d_minus_h_eq_zero").get<double>(), m.at("h_eq_neg_minus_h_d").get<double>()};
  r.h_eq_positive = j.at("h_eq_positive_m").get<double>();
  r.h_eq_zero = j.at("h_eq_zero_m").get<double>();
  r.h_eq_negative = j.at("h_eq_negative_m").get<double>();
  return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace pcbot::io
