#pragma once

#include "pcbot/coil.hpp"

namespace pcbot::power {

struct PowerConfig {
  double idle_power{0.018};        ///< W
  double cycle_energy{0.068};      ///< J per actuation cycle
  double battery_capacity{0.070};  ///< A h
  double battery_voltage{3.7};     ///< V, nominal Li-ion
  double step_length{4.7e-3};      ///< m per cycle
  double cycle_rate{115.0 / 60.0}; ///< cycles per second, one per table revolution
  void validate() const;
};

/// Two switching pulses per cycle through coil plus external resistance.
/// Throws DomainError unless 0 < converter_efficiency <= 1.
double estimate_cycle_energy(const coil::CoilSpec& coil, const coil::CircuitConfig& circuit,
                             double converter_efficiency);

struct BudgetReport {
  double battery_energy{0.0};   ///< J
  long actuation_cycles{0};     ///< actuation-only budget
  double range{0.0};            ///< m, actuation-only
  long cycles_with_idle{0};     ///< idle drain included
  double range_with_idle{0.0};  ///< m
  double runtime{0.0};          ///< s until empty, idle drain included
};

BudgetReport battery_budget(const PowerConfig& cfg);

}  // namespace pcbot::power
