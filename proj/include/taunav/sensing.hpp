#pragma once

// Time-to-transit sensing: the purely geometric form and the form recovered
// from image flow on a side-looking pinhole camera.
//
// Body frame: x forward along the flight line, y to the left. A camera facing
// the right-hand half-plane has its focal point at (0, −f) and its image line
// along the body x-axis; the left camera is the mirror image. Image
// coordinates are negative for features ahead of the vehicle.

#include <cmath>
#include <string>

#include "taunav/error.hpp"
#include "taunav/geometry.hpp"

namespace taunav {

inline constexpr double kDefaultFlowEpsilon = 1e-12;

enum class CameraSide { Left, Right };

struct Camera {
  double focal_length{1.0};
  CameraSide side{CameraSide::Right};
};

struct ImageObservation {
  double d_i{0.0};
  double d_i_dot{0.0};
};

/// Feature position expressed in the vehicle body frame.
struct BodyOffset {
  double longitudinal{0.0};  // ahead of the vehicle is positive
  double lateral{0.0};       // left of the vehicle is positive
};

inline BodyOffset body_offset(const Pose& pose, Vec2 feature) {
  const Vec2 d = feature - pose.position();
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

namespace detail {
inline void require_speed(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("speed must be positive and finite");
}
inline double side_sign(CameraSide side) { return side == CameraSide::Left ? 1.0 : -1.0; }
}  // namespace detail

/// Time until the vehicle crosses the line through the feature perpendicular
/// to its heading. Negative once the feature is behind.
inline double tau_geometric(const Pose& pose, const Feature& feature, double v) {
  detail::require_speed(v);
  return body_offset(pose, feature.position()).longitudinal / v;
}

/// ∂τ/∂θ at fixed position.
inline double tau_dtheta(const Pose& pose, const Feature& feature, double v) {
  detail::require_speed(v);
  return body_offset(pose, feature.position()).lateral / v;
}

/// Camera whose half-plane contains the feature.
inline CameraSide facing_side(const Pose& pose, const Feature& feature) {
  return body_offset(pose, feature.position()).lateral >= 0.0 ? CameraSide::Left
                                                              : CameraSide::Right;
}

/// Solves d·d_i = −f·(x − d_i) for the image coordinate, where x is the
/// feature's longitudinal offset and d its lateral distance from the flight
/// line toward the camera. Requires d > f: the feature has to lie beyond the
/// focal point for its ray to reach the image line.
inline double image_coordinate(double longitudinal, double lateral, double focal_length) {
  if (!(focal_length > 0.0)) throw DomainError("focal length must be positive");
  if (!(lateral > focal_length)) {
    throw NotVisibleError("feature lateral offset " + std::to_string(lateral) +
                          " does not exceed focal length " + std::to_string(focal_length));
  }
  return -focal_length * longitudinal / (lateral - focal_length);
}

inline double project_feature(const Pose& pose, const Feature& feature, const Camera& camera) {
  const BodyOffset b = body_offset(pose, feature.position());
  return image_coordinate(b.longitudinal, detail::side_sign(camera.side) * b.lateral,
                          camera.focal_length);
}

/// Image coordinate and its rate under the unicycle kinematics
/// (ẋ_b = −v + u·y_b, ẏ_b = −u·x_b for a fixed world point).
inline ImageObservation image_flow(const Pose& pose, double v, double u, const Feature& feature,
                                   const Camera& camera) {
  detail::require_speed(v);
  if (!std::isfinite(u)) throw NumericError("turn rate must be finite");
  const BodyOffset b = body_offset(pose, feature.position());
  const double s = detail::side_sign(camera.side);
  const double f = camera.focal_length;
  const double x = b.longitudinal;
  const double d = s * b.lateral;
  const double d_i = image_coordinate(x, d, f);
  const double x_dot = -v + u * b.lateral;
  const double d_dot = s * (-u * b.longitudinal);
  const double gap = d - f;
  const double d_i_dot = -f * (x_dot * gap - x * d_dot) / (gap * gap);
  return {d_i, d_i_dot};
}

/// Time-to-transit recovered from the image alone. Images of features ahead
/// drift toward the focal point, so d_i and ḋ_i have opposite signs before
/// transit and τ = −d_i / ḋ_i.
inline double image_tau(const ImageObservation& obs, double eps_flow = kDefaultFlowEpsilon) {
  if (!(std::abs(obs.d_i_dot) > eps_flow)) {
    throw IndeterminateFlowError("image flow magnitude below threshold");
  }
  return -obs.d_i / obs.d_i_dot;
}

}  // namespace taunav
