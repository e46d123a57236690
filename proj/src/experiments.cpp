#include "pcbot/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "pcbot/actuator.hpp"
#include "pcbot/errors.hpp"
#include "pcbot/io.hpp"
#include "pcbot/svg.hpp"

namespace pcbot::experiments {

using nlohmann::json;

namespace {

json surrogate_json(const ExperimentConfig& cfg) {
  json j = {{"a_core", cfg.solenoid.a_core}, {"a_plate", cfg.solenoid.a_plate},
            {"fitted", cfg.surrogate_fit.has_value()}};
  if (cfg.surrogate_fit)
    j["residuals"] = {cfg.surrogate_fit->residuals[0], cfg.surrogate_fit->residuals[1]};
  return j;
}

std::string csv(auto&& writer, const auto& value) {
  std::ostringstream out;
  writer(out, value);
  return out.str();
}

double step_dt(const dynamics::TableConfig& table, const ExperimentConfig& cfg) {
  return table.period() * cfg.simulate.dt_fraction;
}

std::string run_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03zu", i);
  return buf;
}

}  // namespace

const char* pattern_name(Pattern p) {
  switch (p) {
    case Pattern::Straight: return "straight";
    case Pattern::Rect: return "rect";
    case Pattern::Custom: return "custom";
  }
  return "?";
}

BistabilityOutcome run_bistability(const ExperimentConfig& cfg, Execution exec) {
  BistabilityOutcome out;
  out.actuator = cfg.coil.actuator_coil();
  const auto model = make_force_model(cfg.solenoid, out.actuator, cfg.coil.layer_depths);
  out.report = magnetics::verify_bistability(model);
  const auto ds = cfg.bistability.ds();
  out.map = magnetics::equilibrium_map(cfg.solenoid, ds, cfg.bistability.currents,
                                       force_model_factory(out.actuator, cfg.coil.layer_depths),
                                       exec);
  return out;
}

Files render(const ExperimentConfig& cfg, const BistabilityOutcome& out) {
  json j = io::to_json(out.report);
  j["required_margin_m"] = 1e-4;
  j["passes"] = out.report.ordering_holds && out.report.min_margin() >= 1e-4;
  j["surrogate"] = surrogate_json(cfg);
  j["i0_a"] = cfg.solenoid.i0;
  return {{"bistability.json", io::dump(j)},
          {"equilibrium_map.csv", csv(io::write_equilibrium_csv, out.map)}};
}

CoilOutcome run_coil_optimize(const ExperimentConfig& cfg, Execution exec) {
  CoilOutcome out;
  auto options = cfg.coil.optimizer;
  options.exec = exec;
  out.coupling = attached_coupling(cfg.solenoid, cfg.coil.layer_depths);
  out.baseline = coil::simple_coil(cfg.coil.bounds, options.baseline_width);
  out.result = coil::optimize_coil(cfg.coil.bounds, cfg.coil.circuit, out.coupling, options);
  out.savings = 1.0 - out.result.objective / out.result.baseline_objective;
  return out;
}

Files render(const ExperimentConfig&, const CoilOutcome& out) {
  const auto& m = out.coupling;
  auto describe = [&](const coil::CoilSpec& c) {
    return json{{"turns", c.turns()},
                {"resistance_ohm", coil::coil_resistance(c)},
                {"force_per_amp_n_per_a", coil::force_per_amp(c, m.moment, m.height, m.layer_depths)}};
  };
  const json j = {{"baseline_objective", out.result.baseline_objective},
                  {"optimized_objective", out.result.objective},
                  {"savings_fraction", out.savings},
                  {"iterations", out.result.iterations},
                  {"evaluations", out.result.evaluations},
                  {"magnet_height_m", m.height},
                  {"baseline", describe(out.baseline)},
                  {"optimized", describe(out.result.coil)},
                  {"history", out.result.history}};
  return {{"coil_summary.json", io::dump(j)},
          {"coil_optimized.csv", csv(io::write_coil_csv, out.result.coil)},
          {"coil_baseline.csv", csv(io::write_coil_csv, out.baseline)}};
}

std::pair<Vec2, double> run_conditions(const ExperimentConfig& cfg, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index), 0x5eedu};
  std::mt19937_64 rng(seq);
  const double extent =
      dynamics::FrictionField::kLatticeSize * cfg.table.friction_noise.correlation_length;
  std::uniform_real_distribution<double> where(0.0, extent);
  const double x = where(rng);
  const double y = where(rng);
  double rpm = cfg.table.rpm;
  if (cfg.table.rpm_jitter > 0.0)
    rpm += std::uniform_real_distribution<double>(-cfg.table.rpm_jitter, cfg.table.rpm_jitter)(rng);
  return {{x, y}, rpm};
}

RunRecord simulate_run(const ExperimentConfig& cfg, const dynamics::ActuationSchedule& schedule,
                       int index, bool keep_samples) {
  RunRecord r;
  std::tie(r.field_offset, r.rpm) = run_conditions(cfg, index);
  auto table_cfg = cfg.table;
  table_cfg.rpm = r.rpm;
  const dynamics::Table table(table_cfg, r.field_offset);
  const auto start = dynamics::initial_state(table, cfg.body);
  const int stride = keep_samples ? cfg.simulate.sample_stride : 0;
  r.log = dynamics::run_schedule(start, cfg.body, table, schedule, step_dt(table_cfg, cfg),
                                 std::max(1, stride));
  if (!keep_samples) r.log.samples.clear();
  r.displacement = r.log.total_displacement();
  return r;
}

SimulationOutcome run_simulate(const ExperimentConfig& cfg, Pattern pattern,
                               const dynamics::ActuationSchedule* custom, Execution exec,
                               bool keep_samples) {
  const auto& sim = cfg.simulate;
  SimulationOutcome out;
  out.pattern = pattern;

  auto quiet = cfg.table;
  quiet.friction_noise.amplitude = 0.0;
  control::CalibrationOptions copt;
  copt.grid = sim.calibration_grid;
  copt.detach_duration = sim.detach_duration;
  copt.dt = step_dt(quiet, cfg);
  copt.exec = exec;
  out.calibration = control::calibrate_phase_map(cfg.body, quiet, copt);
  const double step = out.calibration.mean_step();

  switch (pattern) {
    case Pattern::Straight: {
      out.schedule = control::plan_straight(sim.direction, sim.cycles, out.calibration,
                                            sim.detach_duration);
      out.cycles_per_leg = {sim.cycles};
      out.expected_path = {{0.0, 0.0}, Vec2::polar(sim.direction) * (step * sim.cycles)};
      break;
    }
    case Pattern::Rect: {
      const double edge = step * sim.rect_cycles_per_edge;
      const auto plan = control::rectangle_plan(edge, edge, sim.rect_cycles_per_edge);
      out.schedule = control::plan_path(plan, step, out.calibration, sim.detach_duration);
      out.cycles_per_leg = control::leg_cycles(plan, step);
      out.expected_path = plan.waypoints;
      break;
    }
    case Pattern::Custom: {
      if (!custom) throw DomainError("simulate custom: no schedule given");
      out.schedule = *custom;
      out.cycles_per_leg = {static_cast<int>(custom->commands.size())};
      break;
    }
  }
  out.schedule.validate(cfg.table.period());

  out.runs.resize(static_cast<std::size_t>(sim.repeats));
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < sim.repeats; ++i) out.runs[i] = simulate_run(cfg, out.schedule, i, keep_samples);
  } else {
    for (int i = 0; i < sim.repeats; ++i) out.runs[i] = simulate_run(cfg, out.schedule, i, keep_samples);
  }

  std::vector<Vec2> displacements;
  std::vector<double> turn_sums;
  for (const auto& run : out.runs) {
    displacements.push_back(run.displacement);
    out.mean_closure_error += trajectory::closure_error(run.log);
    const auto legs = trajectory::leg_displacements(run.log, out.cycles_per_leg);
    const auto turns = trajectory::turn_angles(legs);
    turn_sums.resize(turns.size(), 0.0);
    for (std::size_t k = 0; k < turns.size(); ++k) turn_sums[k] += turns[k];
  }
  const double n = static_cast<double>(out.runs.size());
  out.mean_closure_error /= n;
  for (double s : turn_sums) out.mean_turn_angles.push_back(s / n);
  out.summary = trajectory::summarize(displacements);
  return out;
}

Files render(const ExperimentConfig& cfg, const SimulationOutcome& out) {
  Files files;
  files["calibration.csv"] = csv(io::write_calibration_csv, out.calibration);
  files["schedule.json"] = io::dump(io::to_json(out.schedule));

  io::SvgPlot plot;
  plot.title = std::string(pattern_name(out.pattern)) + ": " + std::to_string(out.runs.size()) +
               " runs, " + std::to_string(out.schedule.commands.size()) + " cycles";
  plot.expected = out.expected_path;
  json runs = json::array();
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    const auto& r = out.runs[i];
    const std::string name = run_name(i);
    files[name + ".csv"] = csv(io::write_trajectory_csv, r.log.samples);
    files[name + "_starts.csv"] = csv(io::write_cycle_starts_csv, r.log.cycle_starts);
    std::vector<Vec2> path;
    for (const auto& c : r.log.cycle_starts) path.push_back(c.position);
    plot.runs.push_back(std::move(path));
    runs.push_back({{"run", i},
                    {"displacement_m", {r.displacement.x, r.displacement.y}},
                    {"field_offset_m", {r.field_offset.x, r.field_offset.y}},
                    {"rpm", r.rpm}});
  }
  std::ostringstream svg;
  io::write_svg(svg, plot);
  files["trajectories.svg"] = svg.str();

  json j = io::to_json(out.summary);
  j["pattern"] = pattern_name(out.pattern);
  j["seed"] = cfg.seed;
  j["mean_step_m"] = out.calibration.mean_step();
  j["cycles_per_leg"] = out.cycles_per_leg;
  j["mean_turn_angles_rad"] = out.mean_turn_angles;
  j["mean_closure_error_m"] = out.mean_closure_error;
  j["runs_detail"] = runs;
  files["summary.json"] = io::dump(j);
  return files;
}

PowerOutcome run_power(const ExperimentConfig& cfg) {
  PowerOutcome out;
  const auto actuator = cfg.coil.actuator_coil();
  out.coil_resistance = coil::coil_resistance(actuator);
  out.cycle_energy =
      power::estimate_cycle_energy(actuator, cfg.coil.circuit, cfg.coil.converter_efficiency);
  out.budget = power::battery_budget(cfg.power);
  auto modelled = cfg.power;
  modelled.cycle_energy = out.cycle_energy;
  out.modelled = power::battery_budget(modelled);
  return out;
}

Files render(const ExperimentConfig& cfg, const PowerOutcome& out) {
  const json j = {{"coil_resistance_ohm", out.coil_resistance},
                  {"external_resistance_ohm", cfg.coil.circuit.r_ext},
                  {"converter_efficiency", cfg.coil.converter_efficiency},
                  {"estimated_cycle_energy_j", out.cycle_energy},
                  {"configured_cycle_energy_j", cfg.power.cycle_energy},
                  {"budget", io::to_json(out.budget)},
                  {"modelled_budget", io::to_json(out.modelled)}};
  return {{"power.json", io::dump(j)}};
}

}  // namespace pcbot::experiments
