// pcbot: reproduce the actuator, coil, locomotion and power experiments.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcbot/config.hpp"
#include "pcbot/errors.hpp"
#include "pcbot/experiments.hpp"
#include "pcbot/io.hpp"

namespace fs = std::filesystem;
using namespace pcbot;

namespace {

enum ExitCode { kOk = 0, kFailed = 1, kBadConfig = 2 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> repeats;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config (TOML); built-in defaults if omitted");
  cmd->add_option("--seed", c.seed, "override the experiment seed");
  cmd->add_option("--out", c.out, "output directory (default: config output_dir)");
  cmd->add_option("--repeats", c.repeats, "override simulate.repeats")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? default_config() : load_config(c.config);
  if (c.seed) apply_seed(cfg, *c.seed);
  if (c.repeats) cfg.simulate.repeats = *c.repeats;
  if (!c.out.empty()) cfg.output_dir = c.out;
  cfg.validate();
  return cfg;
}

void emit(const ExperimentConfig& cfg, const experiments::Files& files) {
  fs::create_directories(cfg.output_dir);
  for (const auto& [name, text] : files) io::write_file((fs::path(cfg.output_dir) / name).string(), text);
}

int cmd_bistability(const ExperimentConfig& cfg) {
  const auto out = experiments::run_bistability(cfg);
  emit(cfg, experiments::render(cfg, out));
  const auto& r = out.report;
  std::printf("h_eq(+I0) = %.4f mm, h_eq(0) = %.4f mm, h_eq(-I0) = %.4f mm\n",
              r.h_eq_positive * 1e3, r.h_eq_zero * 1e3, r.h_eq_negative * 1e3);
  const char* names[] = {"h_a - h_eq(+I0)", "h_eq(0) - h_a", "h_d - h_eq(0)", "h_eq(-I0) - h_d"};
  bool ok = r.ordering_holds;
  for (int i = 0; i < 4; ++i) {
    const bool good = r.margins[i] >= 1e-4;
    ok = ok && good;
    std::printf("  %-16s %+.4f mm%s\n", names[i], r.margins[i] * 1e3, good ? "" : "  <-- below 0.1 mm");
  }
  std::printf("%s (%zu map cells)\n", ok ? "bistable" : "NOT bistable", out.map.size());
  return ok ? kOk : kFailed;
}

int cmd_coil(const ExperimentConfig& cfg) {
  const auto out = experiments::run_coil_optimize(cfg);
  emit(cfg, experiments::render(cfg, out));
  std::printf("baseline %.4g ohm/N^2, optimized %.4g ohm/N^2 (%zu turns), savings %.1f%%\n",
              out.result.baseline_objective, out.result.objective, out.result.coil.turns(),
              out.savings * 100.0);
  return kOk;
}

int cmd_simulate(const ExperimentConfig& cfg, experiments::Pattern pattern,
                 const std::string& schedule_path) {
  std::optional<dynamics::ActuationSchedule> custom;
  if (pattern == experiments::Pattern::Custom) {
    if (schedule_path.empty()) throw ConfigError("simulate custom needs --schedule <file.json>");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_file(schedule_path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("schedule: ") + e.what());
    }
    custom = io::schedule_from_json(j);
    try {
      custom->validate(cfg.table.period());
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  const auto out = experiments::run_simulate(cfg, pattern, custom ? &*custom : nullptr);
  emit(cfg, experiments::render(cfg, out));
  const auto& s = out.summary;
  constexpr double deg = 180.0 / std::numbers::pi;
  std::printf("%d runs: mean displacement %.2f mm at %.1f deg, direction std %.2f deg, "
              "distance std %.2f mm\n",
              s.runs, s.mean_displacement.norm() * 1e3, s.mean_displacement.angle() * deg,
              s.direction_std * deg, s.distance_std * 1e3);
  for (std::size_t k = 0; k < out.mean_turn_angles.size(); ++k)
    std::printf("  corner %zu: mean turn %.1f deg\n", k + 1, out.mean_turn_angles[k] * deg);
  if (out.cycles_per_leg.size() > 1)
    std::printf("  mean closure error %.2f mm\n", out.mean_closure_error * 1e3);
  return kOk;
}

int cmd_power(const ExperimentConfig& cfg) {
  const auto out = experiments::run_power(cfg);
  emit(cfg, experiments::render(cfg, out));
  std::printf("cycle energy: modelled %.2f mJ, configured %.2f mJ\n", out.cycle_energy * 1e3,
              cfg.power.cycle_energy * 1e3);
  std::printf("actuation-only: %ld cycles, %.1f m; with idle drain: %ld cycles, %.1f m\n",
              out.budget.actuation_cycles, out.budget.range, out.budget.cycles_with_idle,
              out.budget.range_with_idle);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCB robot actuator and locomotion simulator"};
  app.require_subcommand(1);

  Common common;
  auto* bist = app.add_subcommand("bistability", "verify the bi-stable actuator and map h_eq(d, I)");
  add_common(bist, common);
  auto* coil_cmd = app.add_subcommand("coil-optimize", "optimise the spiral coil trace widths");
  add_common(coil_cmd, common);
  auto* pwr = app.add_subcommand("power", "energy per cycle and battery range");
  add_common(pwr, common);

  auto* sim = app.add_subcommand("simulate", "simulate locomotion on the shake table");
  sim->require_subcommand(1);
  std::string schedule_path;
  auto* straight = sim->add_subcommand("straight", "straight line along simulate.direction");
  auto* rect = sim->add_subcommand("rect", "closed square path");
  auto* custom = sim->add_subcommand("custom", "user schedule from JSON");
  for (auto* c : {straight, rect, custom}) add_common(c, common);
  add_common(sim, common);
  custom->add_option("--schedule", schedule_path, "JSON list of {detach_phase, detach_duration}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  ExperimentConfig cfg;
  try {
    cfg = resolve(common);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kBadConfig;
  } catch (const CalibrationError& e) {
    std::cerr << "calibration failed: " << e.what() << '\n';
    return kFailed;
  } catch (const Error& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kBadConfig;
  }

  try {
    if (*bist) return cmd_bistability(cfg);
    if (*coil_cmd) return cmd_coil(cfg);
    if (*pwr) return cmd_power(cfg);
    if (*straight) return cmd_simulate(cfg, experiments::Pattern::Straight, schedule_path);
    if (*rect) return cmd_simulate(cfg, experiments::Pattern::Rect, schedule_path);
    if (*custom) return cmd_simulate(cfg, experiments::Pattern::Custom, schedule_path);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kBadConfig;
  } catch (const InvalidGeometryError& e) {
    std::cerr << "invalid coil: " << e.what() << '\n';
    return kBadConfig;
  } catch (const InfeasibleBoundsError& e) {
    std::cerr << "infeasible bounds: " << e.what() << '\n';
    return kBadConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kOk;
}
