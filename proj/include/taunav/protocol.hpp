#pragma once

// Hybrid switching between steering primitives.
//
// A protocol is an ordered list of segments, each pairing a control law with
// the guard that ends it. Text form, one segment per line:
//
//   taunav-protocol 1
//   name triangle
//   start entry                       # optional: named start pose in the scene
//   u_d(A, B) until tau_zero(B)
//   u_c(B) until tau_diff_max(C, B)
//   u_d(B, C) until half_plane(9, -7, 0.55, -0.83)
//   remaining                         # optional, see below
//
// Laws: u_c(F), u_d(F1, F2), u_p(LEFT, RIGHT).
// Guards: tau_zero(F), tau_diff_max(NEXT, CURRENT), immediate,
//         half_plane(px, py, nx, ny).
// `remaining` continues along the scene's woods edge after the last segment's
// second feature: u_d(E_i, E_i+1) until tau_zero(E_i+1) for every following
// pair. The last segment's guard ends the run.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "taunav/control.hpp"
#include "taunav/error.hpp"
#include "taunav/geometry.hpp"
#include "taunav/scene.hpp"
#include "taunav/sensing.hpp"
#include "taunav/sim.hpp"
#include "taunav/text.hpp"

namespace taunav {

// ---- laws -----------------------------------------------------------------

struct CircleLaw {
  std::string feature;
};
struct DistanceLaw {
  std::string first;
  std::string second;
};
struct PassLaw {
  std::string left;
  std::string right;
};
using LawKind = std::variant<CircleLaw, DistanceLaw, PassLaw>;

// ---- guards ---------------------------------------------------------------

struct TauZero {
  std::string feature;
};
struct TauDiffMax {
  std::string next;
  std::string current;
};
struct Immediate {};
struct PositionHalfPlane {
  Vec2 point;
  Vec2 normal;
};
using Guard = std::variant<TauZero, TauDiffMax, Immediate, PositionHalfPlane>;

struct ControlSegment {
  LawKind law;
  Guard exit;
  std::string label;
};

struct Protocol {
  std::string name;
  std::optional<std::string> start;
  std::vector<ControlSegment> segments;
  bool chain_remaining{false};
};

struct ProtocolConfig {
  double hysteresis{1e-6};             // rise required before a τ-difference peak counts [s]
  std::optional<double> circle_gain;  // u_c correction gain; defaults to Gains::k
  double r_min{1e-6};
};

inline std::string law_label(const LawKind& law) {
  struct {
    std::string operator()(const CircleLaw& l) const { return "u_c[" + l.feature + "]"; }
    std::string operator()(const DistanceLaw& l) const { return "u_d[" + l.first + "," + l.second + "]"; }
    std::string operator()(const PassLaw& l) const { return "u_p[" + l.left + "," + l.right + "]"; }
  } v;
  return std::visit(v, law);
}

inline std::string guard_label(const Guard& guard) {
  struct {
    std::string operator()(const TauZero& g) const { return "tau_zero(" + g.feature + ")"; }
    std::string operator()(const TauDiffMax& g) const {
      return "tau_diff_max(" + g.next + "," + g.current + ")";
    }
    std::string operator()(const Immediate&) const { return "immediate"; }
    std::string operator()(const PositionHalfPlane& g) const {
      return "half_plane(" + std::to_string(g.point.x) + "," + std::to_string(g.point.y) + "," +
             std::to_string(g.normal.x) + "," + std::to_string(g.normal.y) + ")";
    }
  } v;
  return std::visit(v, guard);
}

inline std::vector<std::string> law_features(const LawKind& law) {
  struct {
    std::vector<std::string> operator()(const CircleLaw& l) const { return {l.feature}; }
    std::vector<std::string> operator()(const DistanceLaw& l) const { return {l.first, l.second}; }
    std::vector<std::string> operator()(const PassLaw& l) const { return {l.left, l.right}; }
  } v;
  return std::visit(v, law);
}

inline std::vector<std::string> guard_features(const Guard& guard) {
  if (const auto* g = std::get_if<TauZero>(&guard)) return {g->feature};
  if (const auto* g = std::get_if<TauDiffMax>(&guard)) return {g->next, g->current};
  return {};
}

// ---- guard evaluation -----------------------------------------------------

/// Guard with its feature references resolved against a scene.
struct BoundGuard {
  Guard guard;
  std::vector<Feature> features;  // same order as guard_features()
};

/// Scalar each guard watches: τ_F, τ_next − τ_current, or the signed distance
/// into the half-plane.
inline double guard_signal(const BoundGuard& g, const Pose& pose, double v) {
  if (std::holds_alternative<TauZero>(g.guard)) return tau_geometric(pose, g.features.at(0), v);
  if (std::holds_alternative<TauDiffMax>(g.guard))
    return tau_geometric(pose, g.features.at(0), v) - tau_geometric(pose, g.features.at(1), v);
  if (const auto* h = std::get_if<PositionHalfPlane>(&g.guard))
    return dot(h->normal, pose.position() - h->point);
  return 0.0;
}

/// Decides a guard from the signal samples recorded since its segment began
/// (oldest first, current sample last). Too little history never fires.
inline bool eval_guard(const Guard& guard, std::span<const double> history,
                       double hysteresis = 1e-6) {
  if (std::holds_alternative<Immediate>(guard)) return true;
  if (history.empty()) return false;
  const double cur = history.back();
  if (std::holds_alternative<TauZero>(guard)) {
    if (cur == 0.0) return true;
    if (history.size() < 2) return false;
    const double prev = history[history.size() - 2];
    return (prev > 0.0 && cur < 0.0) || (prev < 0.0 && cur > 0.0);
  }
  if (std::holds_alternative<PositionHalfPlane>(guard)) return cur >= 0.0;
  // TauDiffMax: the signal rose by at least `hysteresis` above its segment
  // minimum, was still rising one sample ago, and has now stopped rising.
  if (history.size() < 3) return false;
  const std::size_t n = history.size();
  const double s0 = history[n - 3];
  const double s1 = history[n - 2];
  const double s2 = history[n - 1];
  if (!(s1 - s0 > 0.0) || !(s2 - s1 <= 0.0)) return false;
  const double lowest = *std::min_element(history.begin(), history.end() - 1);
  return s1 - lowest >= hysteresis;
}

// ---- parsing --------------------------------------------------------------

namespace detail {

inline LawKind parse_law(text::LineReader& r) {
  const text::Token& name = r.next("control law");
  r.expect("(");
  LawKind law;
  if (name.text == "u_c") {
    law = CircleLaw{r.identifier("feature")};
  } else if (name.text == "u_d") {
    std::string a = r.identifier("first feature");
    std::string b = r.identifier("second feature");
    law = DistanceLaw{std::move(a), std::move(b)};
  } else if (name.text == "u_p") {
    std::string a = r.identifier("left feature");
    std::string b = r.identifier("right feature");
    law = PassLaw{std::move(a), std::move(b)};
  } else {
    r.fail_at(name, "unknown control law '" + name.text + "' (expected u_c, u_d or u_p)");
  }
  r.expect(")");
  return law;
}

inline Guard parse_guard(text::LineReader& r) {
  const text::Token& name = r.next("guard");
  if (name.text == "immediate") return Immediate{};
  r.expect("(");
  Guard g;
  if (name.text == "tau_zero") {
    g = TauZero{r.identifier("feature")};
  } else if (name.text == "tau_diff_max") {
    std::string a = r.identifier("next feature");
    std::string b = r.identifier("current feature");
    g = TauDiffMax{std::move(a), std::move(b)};
  } else if (name.text == "half_plane") {
    const double px = r.number("point x");
    const double py = r.number("point y");
    const double nx = r.number("normal x");
    const double ny = r.number("normal y");
    if (nx == 0.0 && ny == 0.0) r.fail_at(name, "half-plane normal must be nonzero");
    g = PositionHalfPlane{{px, py}, {nx, ny}};
  } else {
    r.fail_at(name, "unknown guard '" + name.text + "'");
  }
  r.expect(")");
  return g;
}

}  // namespace detail

inline Protocol parse_protocol(const std::string& content, const std::string& source = "<protocol>") {
  Protocol p;
  bool header = false;
  int header_line = 1;
  const auto lines = text::split_lines(content);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int lineno = static_cast<int>(li + 1);
    auto tokens = text::tokenize(lines[li]);
    if (tokens.empty()) continue;
    text::LineReader r(source, lineno, std::move(tokens), static_cast<int>(lines[li].size() + 1));
    if (!header) {
      const text::Token& key = r.next("header");
      if (key.text != "taunav-protocol") r.fail_at(key, "expected header 'taunav-protocol 1'");
      const text::Token& ver = r.next("format version");
      if (ver.text != "1") r.fail_at(ver, "unsupported protocol format version '" + ver.text + "'");
      r.finish();
      header = true;
      header_line = lineno;
      continue;
    }
    const std::string& key = r.peek().text;
    if (p.chain_remaining) r.fail("nothing may follow 'remaining'");
    if (key == "name") {
      r.next("name");
      p.name = r.identifier("protocol name");
    } else if (key == "start") {
      r.next("start");
      p.start = r.identifier("start name");
    } else if (key == "remaining") {
      r.next("remaining");
      if (p.segments.empty()) r.fail("'remaining' needs a preceding segment");
      p.chain_remaining = true;
    } else if (key == "u_c" || key == "u_d" || key == "u_p") {
      ControlSegment seg;
      seg.law = detail::parse_law(r);
      r.expect("until");
      seg.exit = detail::parse_guard(r);
      seg.label = law_label(seg.law);
      p.segments.push_back(std::move(seg));
    } else {
      r.fail("unknown key '" + key + "'");
    }
    r.finish();
  }
  if (!header) throw ParseError(source, 1, 1, "missing header 'taunav-protocol 1'");
  if (p.name.empty()) throw ParseError(source, header_line, 0, "missing 'name'");
  if (p.segments.empty()) throw ParseError(source, header_line, 0, "protocol has no segments");
  return p;
}

inline Protocol load_protocol(const std::string& path) {
  return parse_protocol(text::read_file(path), path);
}

// ---- built-in sequences ---------------------------------------------------

/// The four woods-edge syntheses, keyed "<red|blue>-<squares|circles>".
/// Squares follow the integrated strategy (after C they navigate by the pole
/// and the remembered landmarks E, F); circles are cue-directed (after C they
/// keep following the woods edge). Guards between listed segments:
///   - u_c entered when the circled feature is transited (tau_zero),
///   - u_c left when the next pair's τ-difference peaks (tau_diff_max),
///   - consecutive u_d segments hand over when their shared feature is
///     transited (tau_zero),
///   - u_p left when its right-hand obstacle is transited.
/// Red runs start from the scene's "red" start pose, blue from "blue".
inline std::vector<std::pair<std::string, Protocol>> builtin_sequences() {
  static const char* const texts[] = {
      R"(taunav-protocol 1
name red-squares
start red
u_p(A, vine) until tau_zero(vine)
u_d(A, B) until tau_zero(B)
u_d(B, C) until tau_zero(pole)
u_c(pole) until tau_diff_max(F, E)
u_d(E, F) until tau_zero(F)
remaining
)",
      R"(taunav-protocol 1
name blue-squares
start blue
u_c(vine) until tau_diff_max(C, B)
u_d(B, C) until tau_zero(pole)
u_c(pole) until tau_diff_max(F, E)
u_d(E, F) until tau_zero(F)
remaining
)",
      R"(taunav-protocol 1
name red-circles
start red
u_p(A, vine) until tau_zero(vine)
u_d(A, B) until tau_zero(B)
u_d(B, C) until tau_zero(C)
u_c(C) until tau_diff_max(D, C)
u_d(C, D) until tau_zero(D)
remaining
)",
      R"(taunav-protocol 1
name blue-circles
start blue
u_c(vine) until tau_diff_max(C, B)
u_d(B, C) until tau_zero(C)
u_c(C) until tau_diff_max(D, C)
u_d(C, D) until tau_zero(D)
remaining
)",
  };
  std::vector<std::pair<std::string, Protocol>> out;
  for (const char* t : texts) {
    Protocol p = parse_protocol(t, "<builtin>");
    std::string name = p.name;
    out.emplace_back(std::move(name), std::move(p));
  }
  return out;
}

inline std::optional<Protocol> find_builtin(std::string_view name) {
  for (auto& [n, p] : builtin_sequences())
    if (n == name) return p;
  return std::nullopt;
}

// ---- binding and execution ------------------------------------------------

/// Segments with `remaining` expanded and every reference checked against
/// the scene.
inline std::vector<ControlSegment> expand_protocol(const Scene& scene, const Protocol& protocol) {
  if (protocol.segments.empty()) throw ValidationError("protocol '" + protocol.name + "' is empty");
  std::vector<ControlSegment> segs = protocol.segments;
  if (protocol.chain_remaining) {
    const auto* last = std::get_if<DistanceLaw>(&segs.back().law);
    if (!last) throw ValidationError("'remaining' must follow a u_d segment");
    const auto idx = scene.woods_edge_index(last->second);
    if (!idx) {
      throw ValidationError("'remaining' needs '" + last->second + "' on the woods edge of scene '" +
                            scene.id + "'");
    }
    for (std::size_t j = *idx; j + 1 < scene.woods_edge.size(); ++j) {
      const std::string& a = scene.woods_edge[j];
      const std::string& b = scene.woods_edge[j + 1];
      ControlSegment seg{DistanceLaw{a, b}, TauZero{b}, ""};
      seg.label = law_label(seg.law);
      segs.push_back(std::move(seg));
    }
  }
  for (const auto& seg : segs) {
    for (const auto& ref : law_features(seg.law)) {
      if (!scene.find(ref))
        throw ValidationError("segment " + seg.label + " references unknown feature '" + ref + "'");
    }
    for (const auto& ref : guard_features(seg.exit)) {
      if (!scene.find(ref))
        throw ValidationError("guard " + guard_label(seg.exit) + " references unknown feature '" + ref + "'");
    }
    const auto refs = law_features(seg.law);
    if (refs.size() == 2 && scene.find(refs[0]) == scene.find(refs[1]))
      throw ValidationError("segment " + seg.label + " uses the same feature twice");
  }
  return segs;
}

namespace detail {

struct BoundSegment {
  LawKind law;
  std::vector<Feature> law_features;
  BoundGuard exit;
  std::string label;
};

inline double eval_law(const BoundSegment& s, const Pose& pose, const Gains& g,
                       const ProtocolConfig& cfg) {
  if (std::holds_alternative<CircleLaw>(s.law))
    return u_circle(pose, s.law_features[0], g, CircleOptions{cfg.circle_gain, cfg.r_min});
  if (std::holds_alternative<DistanceLaw>(s.law))
    return u_distance(pose, s.law_features[0], s.law_features[1], g);
  return u_pass(pose, s.law_features[0], s.law_features[1], g);
}

inline bool is_level_guard(const Guard& g) {
  return std::holds_alternative<TauZero>(g) || std::holds_alternative<PositionHalfPlane>(g);
}

}  // namespace detail

/// Simulates the protocol from `init`. Guards are checked after every
/// integration step; level guards (tau_zero, half_plane) that fire before
/// the final segment are located inside the step by bisection so the next
/// law takes over exactly at the crossing. Samples stay on the k·dt grid.
/// The run ends on the step at which the final segment's guard fires.
inline Trajectory run_protocol(const Scene& scene, const Protocol& protocol, const Pose& init,
                               const Gains& gains, const SimConfig& cfg,
                               const ProtocolConfig& pcfg = {}) {
  gains.validate();
  cfg.validate();
  const std::vector<ControlSegment> segs = expand_protocol(scene, protocol);

  std::vector<detail::BoundSegment> bound;
  Trajectory traj;
  traj.meta = {gains, cfg, scene.id};
  auto note_feature = [&](const std::string& ref) {
    if (std::find(traj.tau_features.begin(), traj.tau_features.end(), ref) == traj.tau_features.end())
      traj.tau_features.push_back(ref);
  };
  for (const auto& s : segs) {
    detail::BoundSegment b;
    b.law = s.law;
    b.label = s.label;
    for (const auto& ref : law_features(s.law)) {
      b.law_features.push_back(scene.at(ref));
      note_feature(ref);
    }
    b.exit.guard = s.exit;
    for (const auto& ref : guard_features(s.exit)) {
      b.exit.features.push_back(scene.at(ref));
      note_feature(ref);
    }
    traj.segment_labels.push_back(s.label);
    bound.push_back(std::move(b));
  }
  std::vector<Feature> tau_feats;
  for (const auto& ref : traj.tau_features) tau_feats.push_back(scene.at(ref));

  const double v = gains.v;
  const std::size_t last = bound.size() - 1;
  std::size_t seg = 0;
  std::vector<double> history;
  SimState state{0.0, init};

  auto law_at = [&](std::size_t i) {
    return [&, i](const SimState& s) {
      try {
        return detail::eval_law(bound[i], s.pose, gains, pcfg);
      } catch (const Error& e) {
        throw SimulationAbort("segment " + std::to_string(i + 1) + " " + bound[i].label + ": " + e.what(),
                              traj, s);
      }
    };
  };
  auto record = [&](const SimState& s) {
    Sample smp{s.t, s.pose, law_at(seg)(s), seg, {}};
    smp.tau.reserve(tau_feats.size());
    for (const auto& f : tau_feats) smp.tau.push_back(tau_geometric(s.pose, f, v));
    traj.samples.push_back(std::move(smp));
  };
  auto guard_fires = [&]() { return eval_guard(bound[seg].exit.guard, history, pcfg.hysteresis); };
  // Enters segment `i` at state `s`; returns true if the run is over.
  auto enter = [&](std::size_t i, const SimState& s) {
    seg = i;
    history.assign(1, guard_signal(bound[seg].exit, s.pose, v));
    while (seg < last && guard_fires()) {
      ++seg;
      history.assign(1, guard_signal(bound[seg].exit, s.pose, v));
    }
    return seg == last && guard_fires();
  };

  bool finished = enter(0, state);
  record(state);
  if (finished) return traj;

  const std::size_t n = cfg.step_count();
  for (std::size_t k = 0; k < n; ++k) {
    const double t_next = static_cast<double>(k + 1) * cfg.dt;
    SimState next = advance(state, law_at(seg), v, cfg.dt, cfg.integrator);
    next.t = t_next;
    double sig = guard_signal(bound[seg].exit, next.pose, v);

    if (seg < last && detail::is_level_guard(bound[seg].exit.guard)) {
      history.push_back(sig);
      if (guard_fires()) {
        history.pop_back();
        const double prev = history.back();
        // Bisect for the first sub-step fraction at which the guard holds.
        auto holds = [&](double sigma) {
          const SimState mid = advance(state, law_at(seg), v, sigma * cfg.dt, cfg.integrator);
          std::vector<double> h{prev, guard_signal(bound[seg].exit, mid.pose, v)};
          return eval_guard(bound[seg].exit.guard, h, pcfg.hysteresis);
        };
        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
          const double m = 0.5 * (lo + hi);
          (holds(m) ? hi : lo) = m;
        }
        SimState mid = hi < 1.0 ? advance(state, law_at(seg), v, hi * cfg.dt, cfg.integrator) : next;
        finished = enter(seg + 1, mid);
        if (hi < 1.0) {
          next = advance(mid, law_at(seg), v, (1.0 - hi) * cfg.dt, cfg.integrator);
          next.t = t_next;
          history.push_back(guard_signal(bound[seg].exit, next.pose, v));
          if (!finished && guard_fires()) finished = seg == last || enter(seg + 1, next);
        }
        state = next;
        if (finished || (k + 1) % cfg.record_stride == 0 || k + 1 == n) record(state);
        if (finished) return traj;
        continue;
      }
    } else {
      history.push_back(sig);
    }

    state = next;
    if (guard_fires()) {
      if (seg == last) {
        record(state);
        return traj;
      }
      finished = enter(seg + 1, state);
    }
    if (finished || (k + 1) % cfg.record_stride == 0 || k + 1 == n) record(state);
    if (finished) return traj;
  }
  throw TimeoutError("protocol '" + protocol.name + "' did not finish within t_max = " +
                         std::to_string(cfg.t_max) + " s (stuck in " + bound[seg].label + ")",
                     traj);
}

}  // namespace taunav
