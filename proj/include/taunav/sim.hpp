#pragma once

// Fixed-step integration of the planar unicycle
//   ẋ = v cos θ,  ẏ = v sin θ,  θ̇ = u.

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "taunav/control.hpp"
#include "taunav/error.hpp"
#include "taunav/geometry.hpp"

namespace taunav {

enum class Integrator { RK4, Euler };

struct SimConfig {
  double dt{1e-3};
  double t_max{60.0};
  Integrator integrator{Integrator::RK4};
  std::size_t record_stride{1};

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
    if (!(t_max > dt) || !std::isfinite(t_max)) throw DomainError("t_max must exceed dt");
    if (record_stride < 1) throw DomainError("record_stride must be at least 1");
  }

  /// Number of steps covering [0, t_max]; ratios within 1e-9 of an integer
  /// are not rounded up.
  std::size_t step_count() const {
    const double r = t_max / dt;
    const double n = std::round(r);
    if (std::abs(r - n) <= 1e-9 * std::max(1.0, r)) return static_cast<std::size_t>(n);
    return static_cast<std::size_t>(std::ceil(r));
  }
};

struct SimState {
  double t{0.0};
  Pose pose{};
};

struct Sample {
  double t{0.0};
  Pose pose{};
  double u{0.0};
  std::size_t segment{0};
  std::vector<double> tau;
};

struct TrajectoryMeta {
  Gains gains{};
  SimConfig config{};
  std::string scene_id;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<std::string> segment_labels;  // indexed by Sample::segment
  std::vector<std::string> tau_features;    // column order of Sample::tau
  TrajectoryMeta meta{};
};

/// The law threw, or produced a non-finite command. Carries everything
/// recorded up to the failing state.
class SimulationAbort : public Error {
 public:
  SimulationAbort(const std::string& what, Trajectory partial, SimState state)
      : Error(what), partial_(std::move(partial)), state_(state) {}
  const Trajectory& partial() const noexcept { return partial_; }
  const SimState& state() const noexcept { return state_; }

 private:
  Trajectory partial_;
  SimState state_;
};

/// t_max reached before the terminating condition.
class TimeoutError : public Error {
 public:
  TimeoutError(const std::string& what, Trajectory partial)
      : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

namespace detail {

struct Deriv {
  double x, y, th;
};

inline Deriv unicycle(double theta, double v, double u) {
  return {v * std::cos(theta), v * std::sin(theta), u};
}

inline void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw NumericError(std::string("non-finite ") + what);
}

}  // namespace detail

/// One step of length h. The law is evaluated at every stage, so a closed
/// loop keeps the integrator's full order; passing a constant law gives a
/// zero-order hold.
template <class Law>
SimState advance(const SimState& s, Law&& law, double v, double h, Integrator integrator) {
  detail::require_finite(v, "speed");
  if (!(v > 0.0)) throw DomainError("speed must be positive");
  const double x = s.pose.x;
  const double y = s.pose.y;
  const double th = s.pose.theta;
  auto eval = [&](double t, double px, double py, double pth) {
    const double u = law(SimState{t, Pose{px, py, pth}});
    detail::require_finite(u, "turn rate");
    return detail::unicycle(pth, v, u);
  };
  if (integrator == Integrator::Euler) {
    const auto k1 = eval(s.t, x, y, th);
    return {s.t + h, Pose{x + h * k1.x, y + h * k1.y, th + h * k1.th}};
  }
  const double h2 = 0.5 * h;
  const auto k1 = eval(s.t, x, y, th);
  const auto k2 = eval(s.t + h2, x + h2 * k1.x, y + h2 * k1.y, th + h2 * k1.th);
  const auto k3 = eval(s.t + h2, x + h2 * k2.x, y + h2 * k2.y, th + h2 * k2.th);
  const auto k4 = eval(s.t + h, x + h * k3.x, y + h * k3.y, th + h * k3.th);
  const double w = h / 6.0;
  return {s.t + h, Pose{x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                        y + w * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
                        th + w * (k1.th + 2.0 * k2.th + 2.0 * k3.th + k4.th)}};
}

/// One step with the turn rate held at u.
inline SimState step(const SimState& state, double u, double v, const SimConfig& cfg) {
  detail::require_finite(u, "turn rate");
  detail::require_finite(state.pose.x, "state");
  detail::require_finite(state.pose.y, "state");
  detail::require_finite(state.pose.theta, "state");
  return advance(state, [u](const SimState&) { return u; }, v, cfg.dt, cfg.integrator);
}

struct NeverStop {
  bool operator()(const SimState&) const { return false; }
};

/// Closed-loop run from `init` for ⌈t_max/dt⌉ steps or until `stop` holds at
/// a step boundary. Sample times are k·dt exactly.
template <class Law, class Stop = NeverStop>
Trajectory simulate(Law&& law, const Pose& init, const Gains& g, const SimConfig& cfg,
                    Stop&& stop = {}) {
  g.validate();
  cfg.validate();
  Trajectory traj;
  traj.meta = {g, cfg, {}};
  traj.segment_labels = {"law"};
  const std::size_t n = cfg.step_count();
  SimState state{0.0, init};

  auto command = [&](const SimState& s) {
    try {
      return law(s);
    } catch (const Error& e) {
      throw SimulationAbort(std::string("control law failed: ") + e.what(), traj, s);
    }
  };
  auto record = [&](const SimState& s) { traj.samples.push_back({s.t, s.pose, command(s), 0, {}}); };

  record(state);
  for (std::size_t k = 0; k < n; ++k) {
    SimState next;
    try {
      next = advance(state, command, g.v, cfg.dt, cfg.integrator);
    } catch (const SimulationAbort&) {
      throw;
    } catch (const Error& e) {
      throw SimulationAbort(e.what(), traj, state);
    }
    next.t = static_cast<double>(k + 1) * cfg.dt;
    state = next;
    const bool done = stop(state);
    if (done || (k + 1) % cfg.record_stride == 0 || k + 1 == n) record(state);
    if (done) break;
  }
  return traj;
}

}  // namespace taunav
