#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pcbot/execution.hpp"

namespace pcbot::coil {

inline constexpr double kMu0 = 1.25663706212e-6;  // vacuum permeability (H/m)

/// Manufacturing envelope shared by every coil on a board.
struct CoilBounds {
  double r0{2.0e-3};         ///< inner radius (m)
  double r1{14.0e-3};        ///< outer radius (m)
  double gap{0.2e-3};        ///< minimum trace-to-trace gap (m)
  double min_width{0.2e-3};  ///< minimum trace width (m)
  double rho_s{0.25e-3};     ///< copper sheet resistance (ohm per square)
  int layers{4};             ///< identical spirals connected in series

  [[nodiscard]] double span() const { return r1 - r0; }
  [[nodiscard]] double min_pitch() const { return gap + min_width; }
  void validate() const;
};

/// Spiral discretised per turn. Turn k has radial pitch s_k, centre radius
/// r_k = r0 + sum_{j<k} s_j + s_k / 2 and trace width W_k = s_k - gap.
struct CoilSpec {
  CoilBounds bounds;
  std::vector<double> pitches;

  [[nodiscard]] std::size_t turns() const { return pitches.size(); }
  [[nodiscard]] double width(std::size_t k) const { return pitches[k] - bounds.gap; }
  [[nodiscard]] std::vector<double> center_radii() const;
  [[nodiscard]] double filled_span() const;
  /// Throws InvalidGeometryError on any violated invariant.
  void validate() const;
};

struct CircuitConfig {
  double r_ext{0.25};           ///< source + H-bridge resistance (ohm)
  double i0{5.0};               ///< drive current (A)
  double actuation_time{1e-3};  ///< per switch (s)
  double t_lr{1e-5};            ///< L/R time constant, informational (s)
  void validate() const;
};

/// On-axis coupling between the coil and the magnet dipole. Layer depths are
/// measured away from the magnet, starting at the magnet-facing layer.
struct MagnetCoupling {
  double moment{0.1};    ///< A m^2
  double height{2.65e-3};  ///< magnet centre to magnet-facing copper (m)
  std::vector<double> layer_depths{0.0, 0.2e-3, 1.4e-3, 1.6e-3};
};

/// Series resistance of all layers (ohm). Throws InvalidGeometryError if any
/// trace width is not positive.
double coil_resistance(const CoilSpec& coil);

/// Sum over turns and layers of m * 3 mu0 r^2 z / (2 (r^2 + z^2)^(5/2)),
/// z = height + depth. Positive current produces an upward (positive) force.
double force_per_amp(const CoilSpec& coil, double moment, double height,
                     std::span<const double> layer_depths);

/// (R_ext + R_coil) / k^2 in ohm per N^2; the current cancels exactly.
double coil_objective(const CoilSpec& coil, const CircuitConfig& circuit,
                      const MagnetCoupling& magnet);

/// P(I) / F(I)^2 evaluated at an explicit current. Equal to coil_objective.
double objective_at_current(const CoilSpec& coil, const CircuitConfig& circuit,
                            const MagnetCoupling& magnet, double current);

/// Constant-pitch spiral with as many turns of `width` as fit in [r0, r1].
CoilSpec simple_coil(const CoilBounds& bounds, double width);

double energy_savings(const CoilSpec& optimized, const CoilSpec& baseline,
                      const CircuitConfig& circuit, const MagnetCoupling& magnet);

struct OptimizerOptions {
  int restarts{10};
  std::uint64_t seed{1};
  double rel_tol{1e-6};
  int max_sweeps{2000};
  double jitter{0.25};             ///< relative pitch perturbation for restarts
  double baseline_width{0.7e-3};   ///< fixed-width reference design (m)
  Execution exec{Execution::Parallel};
};

struct OptimizationResult {
  CoilSpec coil;
  double objective{0.0};
  double baseline_objective{0.0};  ///< 0 when the baseline does not fit
  int iterations{0};               ///< descent sweeps of the winning run
  long evaluations{0};             ///< objective evaluations across all runs
  std::vector<double> history;     ///< objective after each sweep, winning run
};

/// Multi-start projected coordinate descent over the pitch vector.
/// Deterministic for a given seed regardless of `exec`.
OptimizationResult optimize_coil(const CoilBounds& bounds, const CircuitConfig& circuit,
                                 const MagnetCoupling& magnet,
                                 const OptimizerOptions& options = {});

/// Single descent run from `start`, keeping its turn count.
OptimizationResult refine_coil(const CoilSpec& start, const CircuitConfig& circuit,
                               const MagnetCoupling& magnet,
                               const OptimizerOptions& options = {});

}  // namespace pcbot::coil
