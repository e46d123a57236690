#pragma once

#include <span>

#include "pcbot/coil.hpp"
#include "pcbot/magnetics.hpp"

namespace pcbot {

/// Force model whose coil term is the on-axis dipole coupling of `coil`.
/// The magnet-to-coil separation at height h is coil_face_height() - h.
magnetics::ForceModel make_force_model(const magnetics::SolenoidConfig& solenoid,
                                       const coil::CoilSpec& coil,
                                       std::span<const double> layer_depths);

/// Factory for equilibrium_map sweeps over d with a fixed coil.
magnetics::ForceModelFactory force_model_factory(const coil::CoilSpec& coil,
                                                 std::vector<double> layer_depths);

/// Coupling seen by the coil optimiser: the magnet in its attached position.
coil::MagnetCoupling attached_coupling(const magnetics::SolenoidConfig& solenoid,
                                       std::vector<double> layer_depths);

}  // namespace pcbot
