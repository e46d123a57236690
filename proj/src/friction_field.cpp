#include <cmath>
#include <random>

#include "pcbot/dynamics.hpp"
#include "pcbot/errors.hpp"

namespace pcbot::dynamics {

namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// Uniform double in [-1, 1) built from raw engine bits, so the field is
// reproducible across standard library implementations.
double signed_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

int wrap_index(long i) {
  const long n = FrictionField::kLatticeSize;
  return static_cast<int>(((i % n) + n) % n);
}

}  // namespace

FrictionField::FrictionField(const FrictionNoiseSpec& spec)
    : amplitude_(spec.amplitude), inv_cell_(1.0 / spec.correlation_length) {
  if (!(spec.amplitude >= 0.0 && spec.amplitude < 1.0))
    throw ConfigError("friction noise amplitude must lie in [0, 1)");
  if (!(spec.correlation_length > 0.0))
    throw ConfigError("friction noise correlation length must be positive");
  if (amplitude_ == 0.0) return;
  lattice_.resize(static_cast<std::size_t>(kLatticeSize) * kLatticeSize);
  std::mt19937_64 rng(spec.seed);
  for (auto& v : lattice_) v = signed_unit(rng);
}

double FrictionField::operator()(const Vec2& p) const {
  if (lattice_.empty()) return 0.0;
  const double x = p.x * inv_cell_;
  const double y = p.y * inv_cell_;
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double wx = smoothstep(x - fx);
  const double wy = smoothstep(y - fy);
  const int i0 = wrap_index(static_cast<long>(fx));
  const int j0 = wrap_index(static_cast<long>(fy));
  const int i1 = wrap_index(i0 + 1L);
  const int j1 = wrap_index(j0 + 1L);
  auto at = [this](int i, int j) {
    return lattice_[static_cast<std::size_t>(j) * kLatticeSize + static_cast<std::size_t>(i)];
  };
  const double bottom = at(i0, j0) * (1.0 - wx) + at(i1, j0) * wx;
  const double top = at(i0, j1) * (1.0 - wx) + at(i1, j1) * wx;
  return amplitude_ * (bottom * (1.0 - wy) + top * wy);
}

}  // namespace pcbot::dynamics
