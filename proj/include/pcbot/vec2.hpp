#pragma once

#include <cmath>

namespace pcbot {

/// Planar vector in SI units (m, m/s, N) on the table plane.
struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  [[nodiscard]] double norm() const { return std::hypot(x, y); }
  [[nodiscard]] double angle() const { return std::atan2(y, x); }

  /// Unit vector at angle `a` (rad).
  static Vec2 polar(double a) { return {std::cos(a), std::sin(a)}; }
  /// Counter-clockwise unit tangent at angle `a`, i.e. d/da polar(a).
  static Vec2 tangent(double a) { return {-std::sin(a), std::cos(a)}; }

  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

inline Vec2 rotated(const Vec2& v, double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

}  // namespace pcbot
