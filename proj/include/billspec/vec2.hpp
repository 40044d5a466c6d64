#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace billspec {

/// Plain 2-D vector used for positions and momenta.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of the planar cross product a x b.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 normalized(Vec2 a) { return a / norm(a); }
/// Counterclockwise rotation by 90 degrees.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 unit_from_angle(double v) { return {std::cos(v), std::sin(v)}; }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }

/// Row-major 2x2 matrix.
struct Mat2 {
  std::array<double, 4> a{1.0, 0.0, 0.0, 1.0};

  constexpr double operator()(int r, int c) const { return a[2 * r + c]; }
  constexpr double& operator()(int r, int c) { return a[2 * r + c]; }
  constexpr double det() const { return a[0] * a[3] - a[1] * a[2]; }
  /// Maximum absolute row sum.
  double norm_inf() const {
    return std::max(std::abs(a[0]) + std::abs(a[1]), std::abs(a[2]) + std::abs(a[3]));
  }
  constexpr Mat2 operator*(const Mat2& o) const {
    return {{a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3],
             a[2] * o.a[0] + a[3] * o.a[2], a[2] * o.a[1] + a[3] * o.a[3]}};
  }
};

}  // namespace billspec
