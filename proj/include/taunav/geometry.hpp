#pragma once

#include <cmath>
#include <numbers>
#include <string>

namespace taunav {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
/// z-component of a × b; positive when b lies to the left of a.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
/// Left-hand normal (rotation by +π/2).
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Wraps an angle into (−π, π].
inline double normalize_angle(double theta) {
  double r = std::remainder(theta, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

/// Signed smallest difference a − b, in (−π, π].
inline double angle_difference(double a, double b) { return normalize_angle(a - b); }

/// Planar configuration (x, y, θ) in the world frame.
struct Pose {
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  Pose() = default;
  Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}
  Pose(Vec2 p, double theta_) : Pose(p.x, p.y, theta_) {}

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }
};

/// Named point landmark in the world frame.
struct Feature {
  std::string id;
  double x_w{0.0};
  double y_w{0.0};

  Vec2 position() const { return {x_w, y_w}; }
};

}  // namespace taunav
