#pragma once

// Steering primitives built on time-to-transit:
//   u_d  paired-feature distance maintenance (aligns with f1 → f2)
//   u_c  single-feature circling (holds τ at zero)
//   u_p  paired-feature passing (steers through the gap between two features)
// plus the closed-form heading response of u = −k sin θ.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "taunav/error.hpp"
#include "taunav/geometry.hpp"
#include "taunav/sensing.hpp"

namespace taunav {

struct Gains {
  double k{1.0};  // steering gain [1/m]
  double v{1.0};  // forward speed [m/s]

  void validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("gain k must be positive");
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("speed v must be positive");
  }
};

struct CircleOptions {
  std::optional<double> gain;  // defaults to Gains::k
  double r_min{1e-6};
};

namespace detail {
inline void require_distinct(const Feature& f1, const Feature& f2) {
  if (distance(f1.position(), f2.position()) == 0.0) {
    throw DegeneratePairError("features '" + f1.id + "' and '" + f2.id + "' coincide");
  }
}
}  // namespace detail

/// u = k·(τ₂′(θ) − τ₁′(θ)).
inline double u_distance(const Pose& pose, const Feature& f1, const Feature& f2, const Gains& g) {
  g.validate();
  detail::require_distinct(f1, f2);
  return g.k * (tau_dtheta(pose, f2, g.v) - tau_dtheta(pose, f1, g.v));
}

/// Circling law. With y_b the feature's signed lateral offset, the feedback
///   u = (v / y_b)·(1 − sat(k_c·v·τ))
/// gives τ̇ = −k_c·v·τ inside the saturation band, so τ = 0 is held exactly
/// and the path is the circle of radius |y_b| about the feature. Far from
/// transit the correction saturates and the vehicle flies straight in.
inline double u_circle(const Pose& pose, const Feature& f, const Gains& g,
                       const CircleOptions& opts = {}) {
  g.validate();
  const BodyOffset b = body_offset(pose, f.position());
  const double r = std::hypot(b.longitudinal, b.lateral);
  if (r < opts.r_min || std::abs(b.lateral) < opts.r_min) {
    throw SingularCircleError("cannot circle feature '" + f.id + "' from distance " +
                              std::to_string(r));
  }
  const double kc = opts.gain.value_or(g.k);
  const double tau = b.longitudinal / g.v;
  const double correction = std::clamp(kc * g.v * tau, -1.0, 1.0);
  return g.v / b.lateral * (1.0 - correction);
}

/// Passing law with f1 expected on the vehicle's left and f2 on its right.
/// u = k·(τ₂ − τ₁) turns away from whichever feature is farther ahead; the
/// heading settles perpendicular to the gate f2 → f1.
inline double u_pass(const Pose& pose, const Feature& f1, const Feature& f2, const Gains& g) {
  g.validate();
  detail::require_distinct(f1, f2);
  return g.k * (tau_geometric(pose, f2, g.v) - tau_geometric(pose, f1, g.v));
}

/// Exact solution of θ̇ = −k·sin θ.
inline double theta_closed_form(double theta0, double k, double t) {
  if (!std::isfinite(theta0) || std::abs(theta0) >= std::numbers::pi) {
    throw SingularHeadingError("initial heading must lie strictly inside (-pi, pi)");
  }
  return 2.0 * std::atan(std::tan(theta0 / 2.0) * std::exp(-k * t));
}

/// Time at which |u| = k·|sin θ(t)| first falls to α under u = −k·sin θ.
inline double time_to_curvature(double theta0, double k, double alpha) {
  if (!(k > 0.0)) throw DomainError("gain k must be positive");
  if (!std::isfinite(theta0) || std::abs(theta0) >= std::numbers::pi) {
    throw SingularHeadingError("initial heading must lie strictly inside (-pi, pi)");
  }
  const double th = std::abs(theta0);  // the ODE is odd in θ
  if (!(alpha > 0.0) || !(alpha < k * std::sin(th))) {
    throw DomainError("threshold alpha must lie in (0, k|sin theta0|)");
  }
  return (std::log(std::tan(th / 2.0)) - std::log(std::tan(0.5 * std::asin(alpha / k)))) / k;
}

}  // namespace taunav
