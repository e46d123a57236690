#include "pcbot/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pcbot/errors.hpp"
#include "pcbot/toml_lite.hpp"

namespace pcbot {

namespace {

class SectionReader {
 public:
  SectionReader(const toml::Document& doc, const std::string& name) : name_(name) {
    if (auto it = doc.find(name); it != doc.end()) table_ = &it->second;
  }

  ~SectionReader() noexcept(false) {
    if (!table_ || std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : *table_) {
      if (!used_.count(key)) {
        std::ostringstream msg;
        msg << "config line " << value.line << ": unknown key '" << key << "' in [" << name_
            << "]";
        throw ConfigError(msg.str());
      }
    }
  }

  bool has(const std::string& key) const { return table_ && table_->count(key); }

  void number(const std::string& key, double& out) {
    if (const auto* v = find(key)) out = as_number(*v, key);
  }

  void integer(const std::string& key, int& out) {
    if (const auto* v = find(key)) out = static_cast<int>(as_integer(*v, key));
  }

  void seed(const std::string& key, std::uint64_t& out) {
    if (const auto* v = find(key)) {
      const double x = as_integer(*v, key);
      if (x < 0) fail(*v, key, "must be non-negative");
      out = static_cast<std::uint64_t>(x);
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const auto* v = find(key)) {
      const auto* s = std::get_if<std::string>(&v->data);
      if (!s) fail(*v, key, "must be a string");
      out = *s;
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const auto* v = find(key)) {
      const auto* a = std::get_if<toml::Array>(&v->data);
      if (!a) fail(*v, key, "must be an array of numbers");
      out.clear();
      for (const auto& item : *a) out.push_back(as_number(item, key));
    }
  }

 private:
  const toml::Value* find(const std::string& key) {
    used_.insert(key);
    if (!table_) return nullptr;
    auto it = table_->find(key);
    return it == table_->end() ? nullptr : &it->second;
  }

  [[noreturn]] void fail(const toml::Value& v, const std::string& key,
                         const std::string& what) const {
    std::ostringstream msg;
    msg << "config line " << v.line << ": [" << name_ << "] " << key << " " << what;
    throw ConfigError(msg.str());
  }

  double as_number(const toml::Value& v, const std::string& key) const {
    const auto* d = std::get_if<double>(&v.data);
    if (!d) fail(v, key, "must be a number");
    return *d;
  }

  double as_integer(const toml::Value& v, const std::string& key) const {
    const double d = as_number(v, key);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) fail(v, key, "must be an integer");
    return d;
  }

  std::string name_;
  const std::map<std::string, toml::Value>* table_{nullptr};
  std::set<std::string> used_;
};

const std::set<std::string> kSections{
    "",        "experiment", "solenoid", "calibration", "bistability",
    "coil",    "circuit",    "optimizer", "table",      "table.friction_noise",
    "body",    "sensor",     "power",     "simulate"};

void fit_surrogate_if_needed(ExperimentConfig& cfg, bool have_core, bool have_plate) {
  if (have_core != have_plate)
    throw ConfigError("solenoid: give both a_core and a_plate, or neither to fit them");
  if (have_core) return;
  auto geometry = cfg.solenoid;
  geometry.a_core = geometry.a_plate = 1.0;
  geometry.validate();
  const auto fit = magnetics::calibrate_surrogate(cfg.solenoid, cfg.calibration);
  cfg.solenoid.a_core = fit.a_core;
  cfg.solenoid.a_plate = fit.a_plate;
  cfg.surrogate_fit = fit;
}

}  // namespace

std::vector<double> BistabilitySweep::ds() const {
  std::vector<double> out;
  if (d_steps == 1) return {d_min};
  for (int i = 0; i < d_steps; ++i)
    out.push_back(d_min + (d_max - d_min) * i / (d_steps - 1));
  return out;
}

coil::CoilSpec CoilSection::actuator_coil() const {
  if (!actuator_pitches.empty()) {
    coil::CoilSpec c{bounds, actuator_pitches};
    c.validate();
    return c;
  }
  return coil::simple_coil(bounds, actuator_width);
}

void ExperimentConfig::validate() const {
  solenoid.validate();
  if (!(bistability.d_steps >= 1 && bistability.d_min > 0.0 &&
        bistability.d_max >= bistability.d_min))
    throw ConfigError("bistability: need d_steps >= 1 and 0 < d_min <= d_max");
  if (bistability.currents.empty()) throw ConfigError("bistability: currents must not be empty");
  try {
    coil.bounds.validate();
    (void)coil.actuator_coil();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  coil.circuit.validate();
  if (!(coil.converter_efficiency > 0.0 && coil.converter_efficiency <= 1.0))
    throw ConfigError("circuit: converter_efficiency must lie in (0, 1]");
  if (coil.layer_depths.empty()) throw ConfigError("coil: layer_depths must not be empty");
  for (double z : coil.layer_depths)
    if (!(z >= 0.0)) throw ConfigError("coil: layer_depths must be non-negative");
  if (coil.optimizer.restarts < 0 || coil.optimizer.max_sweeps < 1 ||
      !(coil.optimizer.rel_tol > 0.0) || !(coil.optimizer.jitter >= 0.0 && coil.optimizer.jitter < 1.0))
    throw ConfigError("optimizer: need restarts >= 0, max_sweeps >= 1, rel_tol > 0, jitter in [0, 1)");
  table.validate();
  {
    const auto& n = table.friction_noise;
    if (!(n.amplitude >= 0.0 && n.amplitude < 1.0))
      throw ConfigError("table.friction_noise: amplitude must lie in [0, 1)");
    if (!(n.correlation_length > 0.0))
      throw ConfigError("table.friction_noise: correlation_length must be positive");
  }
  body.validate();
  sensor.validate();
  power.validate();
  const auto& s = simulate;
  if (s.repeats < 1 || s.cycles < 0 || s.sample_stride < 1 || s.rect_cycles_per_edge < 1 ||
      s.calibration_grid < 2)
    throw ConfigError("simulate: counts out of range");
  if (!(s.detach_duration > 0.0 && s.detach_duration < table.period()))
    throw ConfigError("simulate: detach_duration must lie in (0, table period)");
  if (!(s.dt_fraction > 0.0 && s.dt_fraction <= 1.0 / 200.0))
    throw ConfigError("simulate: dt_fraction must lie in (0, 1/200]");
}

void apply_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.coil.optimizer.seed = seed;
  cfg.table.friction_noise.seed = seed;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  fit_surrogate_if_needed(cfg, false, false);
  cfg.coil.circuit.i0 = cfg.solenoid.i0;
  cfg.coil.optimizer.seed = cfg.seed;
  cfg.table.friction_noise.seed = cfg.seed;
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  const toml::Document doc = toml::parse(text);
  for (const auto& [name, table] : doc) {
    if (!kSections.count(name)) throw ConfigError("unknown config section [" + name + "]");
  }
  ExperimentConfig cfg;
  bool have_core = false;
  bool have_plate = false;
  {
    SectionReader r(doc, "");
  }
  {
    SectionReader r(doc, "experiment");
    r.seed("seed", cfg.seed);
    r.text("output_dir", cfg.output_dir);
  }
  {
    SectionReader r(doc, "solenoid");
    auto& s = cfg.solenoid;
    r.number("d", s.d);
    r.number("h_a", s.h_a);
    r.number("h_d", s.h_d);
    r.number("i0", s.i0);
    have_core = r.has("a_core");
    have_plate = r.has("a_plate");
    r.number("a_core", s.a_core);
    r.number("a_plate", s.a_plate);
    r.number("core_offset", s.core_offset);
    r.number("magnet_moment", s.magnet_moment);
    r.number("coil_setback", s.coil_setback);
  }
  {
    SectionReader r(doc, "calibration");
    auto& c = cfg.calibration;
    r.number("h_eq_zero", c.h_eq_zero);
    r.number("attached_friction", c.attached_friction);
    r.number("mu_rubber_kinetic", c.mu_rubber_kinetic);
    r.number("magnet_weight", c.magnet_weight);
  }
  {
    SectionReader r(doc, "bistability");
    auto& b = cfg.bistability;
    r.number("d_min", b.d_min);
    r.number("d_max", b.d_max);
    r.integer("d_steps", b.d_steps);
    r.numbers("currents", b.currents);
  }
  {
    SectionReader r(doc, "coil");
    auto& b = cfg.coil.bounds;
    r.number("r0", b.r0);
    r.number("r1", b.r1);
    r.number("gap", b.gap);
    r.number("min_width", b.min_width);
    r.number("rho_s", b.rho_s);
    r.integer("layers", b.layers);
    r.numbers("layer_depths", cfg.coil.layer_depths);
    r.number("actuator_width", cfg.coil.actuator_width);
    r.numbers("actuator_pitches", cfg.coil.actuator_pitches);
  }
  {
    SectionReader r(doc, "circuit");
    auto& c = cfg.coil.circuit;
    r.number("r_ext", c.r_ext);
    r.number("actuation_time", c.actuation_time);
    r.number("t_lr", c.t_lr);
    r.number("converter_efficiency", cfg.coil.converter_efficiency);
  }
  {
    SectionReader r(doc, "optimizer");
    auto& o = cfg.coil.optimizer;
    r.integer("restarts", o.restarts);
    r.number("rel_tol", o.rel_tol);
    r.integer("max_sweeps", o.max_sweeps);
    r.number("jitter", o.jitter);
    r.number("baseline_width", o.baseline_width);
  }
  {
    SectionReader r(doc, "table");
    auto& t = cfg.table;
    r.number("rpm", t.rpm);
    r.number("orbit_radius", t.orbit_radius);
    r.number("mu_chassis", t.mu_chassis);
    r.number("mu_rubber_kinetic", t.mu_rubber_kinetic);
    r.number("mu_rubber_static", t.mu_rubber_static);
    r.number("rpm_jitter", t.rpm_jitter);
  }
  {
    SectionReader r(doc, "table.friction_noise");
    r.number("amplitude", cfg.table.friction_noise.amplitude);
    r.number("correlation_length", cfg.table.friction_noise.correlation_length);
  }
  {
    SectionReader r(doc, "body");
    auto& b = cfg.body;
    r.number("mass", b.mass);
    r.number("com_offset", b.com_offset);
    r.number("attached_friction_force", b.attached_friction_force);
    r.number("detached_friction_force", b.detached_friction_force);
    r.number("contact_p1_radius", b.contact_p1_radius);
    r.number("contact_p2_radius", b.contact_p2_radius);
    r.number("magnet_mass", b.magnet_mass);
  }
  {
    SectionReader r(doc, "sensor");
    auto& s = cfg.sensor;
    r.number("polarizer_offset", s.polarizer_offset);
    r.number("ambient_floor", s.ambient_floor);
    r.number("noise_sigma", s.noise_sigma);
    r.number("sample_rate", s.sample_rate);
  }
  {
    SectionReader r(doc, "power");
    auto& p = cfg.power;
    r.number("idle_power", p.idle_power);
    r.number("cycle_energy", p.cycle_energy);
    r.number("battery_capacity", p.battery_capacity);
    r.number("battery_voltage", p.battery_voltage);
    r.number("step_length", p.step_length);
    r.number("cycle_rate", p.cycle_rate);
  }
  {
    SectionReader r(doc, "simulate");
    auto& s = cfg.simulate;
    r.integer("repeats", s.repeats);
    r.integer("cycles", s.cycles);
    r.number("detach_duration", s.detach_duration);
    r.number("direction", s.direction);
    r.number("dt_fraction", s.dt_fraction);
    r.integer("sample_stride", s.sample_stride);
    r.integer("rect_cycles_per_edge", s.rect_cycles_per_edge);
    r.integer("calibration_grid", s.calibration_grid);
  }

  cfg.coil.circuit.i0 = cfg.solenoid.i0;
  apply_seed(cfg, cfg.seed);
  fit_surrogate_if_needed(cfg, have_core, have_plate);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace pcbot
