#include "pcbot/coil.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pcbot/errors.hpp"

namespace pcbot::coil {

void CoilBounds::validate() const {
  if (!(r0 > 0.0)) throw InvalidGeometryError("coil: r0 must be positive");
  if (!(r1 > r0)) throw InvalidGeometryError("coil: r1 must exceed r0");
  if (!(gap > 0.0)) throw InvalidGeometryError("coil: gap must be positive");
  if (!(min_width > 0.0)) throw InvalidGeometryError("coil: min_width must be positive");
  if (!(rho_s > 0.0)) throw InvalidGeometryError("coil: rho_s must be positive");
  if (layers < 1) throw InvalidGeometryError("coil: at least one layer required");
}

std::vector<double> CoilSpec::center_radii() const {
  std::vector<double> r(pitches.size());
  double inner = bounds.r0;
  for (std::size_t k = 0; k < pitches.size(); ++k) {
    r[k] = inner + 0.5 * pitches[k];
    inner += pitches[k];
  }
  return r;
}

double CoilSpec::filled_span() const {
  double s = 0.0;
  for (double p : pitches) s += p;
  return s;
}

void CoilSpec::validate() const {
  bounds.validate();
  if (pitches.empty()) throw InvalidGeometryError("coil: no turns");
  // Tolerance absorbs rounding of pitches that were projected onto the bounds.
  const double eps = 1e-12;
  for (std::size_t k = 0; k < pitches.size(); ++k) {
    if (pitches[k] < bounds.min_pitch() - eps) {
      std::ostringstream msg;
      msg << "coil: turn " << k << " width " << width(k) << " m below minimum "
          << bounds.min_width << " m";
      throw InvalidGeometryError(msg.str());
    }
  }
  if (filled_span() > bounds.span() + eps)
    throw InvalidGeometryError("coil: turns overflow the outer radius");
}

void CircuitConfig::validate() const {
  if (!(r_ext >= 0.0)) throw ConfigError("circuit: r_ext must be non-negative");
  if (!(i0 > 0.0)) throw ConfigError("circuit: i0 must be positive");
  if (!(actuation_time >= 0.0)) throw ConfigError("circuit: actuation_time must be non-negative");
  if (!(t_lr >= 0.0)) throw ConfigError("circuit: t_lr must be non-negative");
  if (actuation_time > 0.0 && t_lr * 10.0 > actuation_time)
    throw ConfigError("circuit: t_lr must be at least 10x shorter than actuation_time");
}

double coil_resistance(const CoilSpec& coil) {
  const auto radii = coil.center_radii();
  double per_layer = 0.0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double w = coil.width(k);
    if (!(w > 0.0)) {
      std::ostringstream msg;
      msg << "coil: turn " << k << " has non-positive width " << w;
      throw InvalidGeometryError(msg.str());
    }
    per_layer += 2.0 * std::numbers::pi * coil.bounds.rho_s * radii[k] / w;
  }
  return per_layer * coil.bounds.layers;
}

double force_per_amp(const CoilSpec& coil, double moment, double height,
                     std::span<const double> layer_depths) {
  if (!(height > 0.0)) throw DomainError("force_per_amp: magnet height must be positive");
  const auto radii = coil.center_radii();
  double sum = 0.0;
  for (double depth : layer_depths) {
    const double z = height + depth;
    for (double r : radii) {
      const double q = r * r + z * z;
      sum += 3.0 * kMu0 * r * r * z / (2.0 * q * q * std::sqrt(q));
    }
  }
  return moment * sum;
}

double coil_objective(const CoilSpec& coil, const CircuitConfig& circuit,
                      const MagnetCoupling& magnet) {
  const double k = force_per_amp(coil, magnet.moment, magnet.height, magnet.layer_depths);
  if (k == 0.0) throw DegenerateObjectiveError("coil objective: zero force per amp");
  return (circuit.r_ext + coil_resistance(coil)) / (k * k);
}

double objective_at_current(const CoilSpec& coil, const CircuitConfig& circuit,
                            const MagnetCoupling& magnet, double current) {
  const double force =
      force_per_amp(coil, magnet.moment, magnet.height, magnet.layer_depths) * current;
  if (force == 0.0) throw DegenerateObjectiveError("coil objective: zero force");
  const double power = current * current * (circuit.r_ext + coil_resistance(coil));
  return power / (force * force);
}

CoilSpec simple_coil(const CoilBounds& bounds, double width) {
  bounds.validate();
  if (width < bounds.min_width)
    throw InvalidGeometryError("simple_coil: width below manufacturable minimum");
  const double pitch = width + bounds.gap;
  // Guard against 12/0.9-style quotients landing a hair under an integer.
  const auto turns = static_cast<std::size_t>(std::floor(bounds.span() / pitch + 1e-9));
  if (turns == 0) throw InfeasibleBoundsError("simple_coil: no turn fits between r0 and r1");
  return CoilSpec{bounds, std::vector<double>(turns, pitch)};
}

double energy_savings(const CoilSpec& optimized, const CoilSpec& baseline,
                      const CircuitConfig& circuit, const MagnetCoupling& magnet) {
  return 1.0 - coil_objective(optimized, circuit, magnet) /
                   coil_objective(baseline, circuit, magnet);
}

}  // namespace pcbot::coil
