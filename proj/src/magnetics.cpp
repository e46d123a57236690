#include "pcbot/magnetics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pcbot/errors.hpp"

namespace pcbot::magnetics {

namespace {

double core_term(const SolenoidConfig& c, double h) {
  return 1.0 / std::pow((c.d - h) + c.core_offset, 4);
}

double plate_term(double h) { return 1.0 / std::pow(2.0 * h, 4); }

}  // namespace

void SolenoidConfig::validate() const {
  if (!(d > 0.0)) throw ConfigError("solenoid: d must be positive");
  if (!(h_a > 0.0 && h_a < d)) throw ConfigError("solenoid: h_a must lie in (0, d)");
  if (!(h_d > 0.0 && h_d < d)) throw ConfigError("solenoid: h_d must lie in (0, d)");
  if (!(i0 >= 0.0)) throw ConfigError("solenoid: i0 must be non-negative");
  if (!(a_core > 0.0) || !(a_plate > 0.0))
    throw ConfigError("solenoid: a_core and a_plate must be positive");
  if (!(core_offset >= 0.0)) throw ConfigError("solenoid: core_offset must be non-negative");
  if (!(magnet_moment >= 0.0)) throw ConfigError("solenoid: magnet_moment must be non-negative");
}

ForceModel::ForceModel(SolenoidConfig config, CoilForceProfile coil_force_per_amp)
    : config_(config), profile_(std::move(coil_force_per_amp)) {
  config_.validate();
  if (!profile_) profile_ = [](double) { return 0.0; };
}

double zero_current_force(const ForceModel& model, double h) {
  const auto& c = model.config();
  if (!(h > 0.0 && h < c.d)) {
    std::ostringstream msg;
    msg << "magnet height " << h << " m outside (0, " << c.d << ")";
    throw DomainError(msg.str());
  }
  return c.a_core * core_term(c, h) - c.a_plate * plate_term(h);
}

double total_force(const ForceModel& model, double h, double current) {
  return zero_current_force(model, h) + model.coil_force_per_amp(h) * current;
}

double find_equilibrium(const ForceModel& model, double current) {
  const double d = model.config().d;
  double lo = 0.05 * d;
  double hi = 0.95 * d;
  double f_lo = total_force(model, lo, current);
  const double f_hi = total_force(model, hi, current);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "no equilibrium for I = " << current << " A: force keeps sign on bracket";
    throw NoEquilibriumError(msg.str());
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxBisectionIterations; ++it) {
    mid = 0.5 * (lo + hi);
    const double f_mid = total_force(model, mid, current);
    if (std::abs(f_mid) < kForceTolerance) break;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

double BistabilityReport::min_margin() const {
  return *std::min_element(margins.begin(), margins.end());
}

BistabilityReport verify_bistability(const ForceModel& model) {
  const auto& c = model.config();
  BistabilityReport r;
  r.h_eq_positive = find_equilibrium(model, c.i0);
  r.h_eq_zero = find_equilibrium(model, 0.0);
  r.h_eq_negative = find_equilibrium(model, -c.i0);
  r.margins = {c.h_a - r.h_eq_positive, r.h_eq_zero - c.h_a, c.h_d - r.h_eq_zero,
               r.h_eq_negative - c.h_d};
  r.ordering_holds = std::all_of(r.margins.begin(), r.margins.end(),
                                 [](double m) { return m > 0.0; });
  return r;
}

std::vector<EquilibriumCell> equilibrium_map(const SolenoidConfig& base,
                                             std::span<const double> ds,
                                             std::span<const double> currents,
                                             const ForceModelFactory& factory,
                                             Execution exec) {
  const std::size_t nd = ds.size();
  const std::size_t ni = currents.size();
  std::vector<EquilibriumCell> cells(nd * ni);

  auto fill_row = [&](std::size_t row) {
    SolenoidConfig cfg = base;
    cfg.d = ds[row];
    const ForceModel model = factory(cfg);
    for (std::size_t col = 0; col < ni; ++col) {
      auto& cell = cells[row * ni + col];
      cell.d = ds[row];
      cell.current = currents[col];
      try {
        cell.h_eq = find_equilibrium(model, currents[col]);
      } catch (const NoEquilibriumError&) {
        cell.h_eq.reset();
      }
    }
  };

  if (exec == Execution::Parallel) {
    const auto n = static_cast<long>(nd);
#pragma omp parallel for schedule(dynamic)
    for (long row = 0; row < n; ++row) fill_row(static_cast<std::size_t>(row));
  } else {
    for (std::size_t row = 0; row < nd; ++row) fill_row(row);
  }
  return cells;
}

CalibrationResult calibrate_surrogate(const SolenoidConfig& config,
                                      const CalibrationTargets& t) {
  // Both conditions are linear in (a_core, a_plate):
  //   a_core C(h_eq) - a_plate P(h_eq) = 0
  //   a_plate P(h_a) - a_core C(h_a) = attached_friction / mu - magnet_weight
  const double c_eq = core_term(config, t.h_eq_zero);
  const double p_eq = plate_term(t.h_eq_zero);
  const double c_a = core_term(config, config.h_a);
  const double p_a = plate_term(config.h_a);
  const double pull = t.attached_friction / t.mu_rubber_kinetic - t.magnet_weight;

  const double det = c_eq * p_a - p_eq * c_a;
  CalibrationResult r;
  if (det != 0.0) {
    r.a_core = p_eq * pull / det;
    r.a_plate = c_eq * pull / det;
  }
  r.residuals[0] = r.a_core * c_eq - r.a_plate * p_eq;
  r.residuals[1] =
      t.mu_rubber_kinetic * (r.a_plate * p_a - r.a_core * c_a + t.magnet_weight) -
      t.attached_friction;
  if (det == 0.0 || !(r.a_core > 0.0) || !(r.a_plate > 0.0) || !(pull > 0.0)) {
    std::ostringstream msg;
    msg << "surrogate calibration failed: a_core=" << r.a_core << " a_plate=" << r.a_plate
        << " residuals=[" << r.residuals[0] << ", " << r.residuals[1] << "]";
    throw CalibrationError(msg.str());
  }
  return r;
}

}  // namespace pcbot::magnetics
