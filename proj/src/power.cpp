#include "pcbot/power.hpp"

#include <cmath>

#include "pcbot/errors.hpp"

namespace pcbot::power {

void PowerConfig::validate() const {
  if (!(idle_power > 0.0 && cycle_energy > 0.0 && battery_capacity > 0.0 &&
        battery_voltage > 0.0 && step_length > 0.0 && cycle_rate > 0.0))
    throw ConfigError("power: all fields must be strictly positive");
}

double estimate_cycle_energy(const coil::CoilSpec& coil, const coil::CircuitConfig& circuit,
                             double converter_efficiency) {
  if (!(converter_efficiency > 0.0 && converter_efficiency <= 1.0))
    throw DomainError("estimate_cycle_energy: efficiency must lie in (0, 1]");
  const double r_total = circuit.r_ext + coil::coil_resistance(coil);
  return 2.0 * circuit.i0 * circuit.i0 * r_total * circuit.actuation_time / converter_efficiency;
}

BudgetReport battery_budget(const PowerConfig& cfg) {
  cfg.validate();
  BudgetReport r;
  r.battery_energy = cfg.battery_capacity * 3600.0 * cfg.battery_voltage;
  r.actuation_cycles = static_cast<long>(std::floor(r.battery_energy / cfg.cycle_energy));
  r.range = static_cast<double>(r.actuation_cycles) * cfg.step_length;
  // Each cycle also pays idle power for one cycle period.
  const double per_cycle = cfg.cycle_energy + cfg.idle_power / cfg.cycle_rate;
  r.cycles_with_idle = static_cast<long>(std::floor(r.battery_energy / per_cycle));
  r.range_with_idle = static_cast<double>(r.cycles_with_idle) * cfg.step_length;
  r.runtime = r.battery_energy / (per_cycle * cfg.cycle_rate);
  return r;
}

}  // namespace pcbot::power
