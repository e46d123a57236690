#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pcbot/execution.hpp"

namespace pcbot::magnetics {

/// Geometry and surrogate force coefficients of the bi-stable actuator.
///
/// Heights are measured from the steel table surface to the magnet's dipole
/// centre. The zero-current force is modelled as the difference of two
/// inverse-quartic image attractions: one toward the steel core above,
/// one toward the steel plate under the table coating.
struct SolenoidConfig {
  double d{7.5e-3};            ///< core-to-table distance (m)
  double h_a{1.85e-3};         ///< attached magnet height (m)
  double h_d{2.90e-3};         ///< detached magnet height (m)
  double i0{5.0};              ///< switching current (A)
  double a_core{0.0};          ///< core image coefficient (N m^4)
  double a_plate{0.0};         ///< plate image coefficient (N m^4)
  double core_offset{0.5e-3};  ///< regulariser for the (d-h)^-4 term (m)
  double magnet_moment{0.1};   ///< dipole moment (A m^2)
  double coil_setback{3.0e-3}; ///< core bottom to magnet-facing copper layer (m)

  /// Height of the magnet-facing copper layer above the table.
  [[nodiscard]] double coil_face_height() const { return d - coil_setback; }

  /// Checks what force evaluation needs. The h_a < h_d ordering is a design
  /// property reported by verify_bistability, not a precondition.
  void validate() const;
};

/// Coil force per unit current as a function of magnet height (N/A).
using CoilForceProfile = std::function<double(double h)>;

/// F(d, h, I) = F0(h) + k(h) I. Immutable; safe to share across threads.
class ForceModel {
 public:
  ForceModel(SolenoidConfig config, CoilForceProfile coil_force_per_amp);

  [[nodiscard]] const SolenoidConfig& config() const { return config_; }
  [[nodiscard]] double coil_force_per_amp(double h) const { return profile_(h); }

 private:
  SolenoidConfig config_;
  CoilForceProfile profile_;
};

/// Upward-positive vertical force on the magnet at zero current (N).
/// Throws DomainError unless 0 < h < d.
double zero_current_force(const ForceModel& model, double h);

double total_force(const ForceModel& model, double h, double current);

inline constexpr double kForceTolerance = 1e-6;   // N
inline constexpr int kMaxBisectionIterations = 200;

/// Equilibrium height for `current` by bisection on (0.05 d, 0.95 d).
/// Throws NoEquilibriumError when the bracket has no sign change.
double find_equilibrium(const ForceModel& model, double current);

struct BistabilityReport {
  bool ordering_holds{false};
  /// h_a - h_eq(I0), h_eq(0) - h_a, h_d - h_eq(0), h_eq(-I0) - h_d.
  std::array<double, 4> margins{};
  double h_eq_positive{0.0};  ///< h_eq(+I0)
  double h_eq_zero{0.0};      ///< h_eq(0)
  double h_eq_negative{0.0};  ///< h_eq(-I0)

  [[nodiscard]] double min_margin() const;
};

BistabilityReport verify_bistability(const ForceModel& model);

struct EquilibriumCell {
  double d{0.0};
  double current{0.0};
  std::optional<double> h_eq;
};

using ForceModelFactory = std::function<ForceModel(const SolenoidConfig&)>;

/// h_eq over the (d, I) grid, row-major in d. Missing equilibria are
/// recorded as empty cells.
std::vector<EquilibriumCell> equilibrium_map(const SolenoidConfig& base,
                                             std::span<const double> ds,
                                             std::span<const double> currents,
                                             const ForceModelFactory& factory,
                                             Execution exec = Execution::Parallel);

struct CalibrationTargets {
  double h_eq_zero{2.3e-3};        ///< desired zero-current equilibrium (m)
  double attached_friction{0.073}; ///< kinetic friction in attached state (N)
  double mu_rubber_kinetic{0.45};
  double magnet_weight{1.0e-3 * 9.81};  ///< weight share carried by the magnet (N)
};

struct CalibrationResult {
  double a_core{0.0};
  double a_plate{0.0};
  /// F0(h_eq_zero) in N, and attached friction minus its target in N.
  std::array<double, 2> residuals{};
};

/// Solves the two linear calibration conditions for (a_core, a_plate).
/// Throws CalibrationError when the fit is non-physical.
CalibrationResult calibrate_surrogate(const SolenoidConfig& config,
                                      const CalibrationTargets& targets);

}  // namespace pcbot::magnetics
