#include "pcbot/actuator.hpp"

#include <vector>

namespace pcbot {

magnetics::ForceModel make_force_model(const magnetics::SolenoidConfig& solenoid,
                                       const coil::CoilSpec& coil,
                                       std::span<const double> layer_depths) {
  std::vector<double> depths(layer_depths.begin(), layer_depths.end());
  const double face = solenoid.coil_face_height();
  const double moment = solenoid.magnet_moment;
  auto profile = [coil, depths = std::move(depths), face, moment](double h) {
    // Above the copper the separation changes sign and the odd-in-z
    // gradient flips the force, pulling the magnet back toward the coil.
    const double z = face - h;
    if (z == 0.0) return 0.0;
    const double k = coil::force_per_amp(coil, moment, std::abs(z), depths);
    return z > 0.0 ? k : -k;
  };
  return magnetics::ForceModel(solenoid, std::move(profile));
}

magnetics::ForceModelFactory force_model_factory(const coil::CoilSpec& coil,
                                                 std::vector<double> layer_depths) {
  return [coil, depths = std::move(layer_depths)](const magnetics::SolenoidConfig& cfg) {
    return make_force_model(cfg, coil, depths);
  };
}

coil::MagnetCoupling attached_coupling(const magnetics::SolenoidConfig& solenoid,
                                       std::vector<double> layer_depths) {
  return coil::MagnetCoupling{solenoid.magnet_moment,
                              solenoid.coil_face_height() - solenoid.h_a,
                              std::move(layer_depths)};
}

}  // namespace pcbot
