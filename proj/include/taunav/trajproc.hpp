#pragma once

// Track post-processing: smoothing, arc-length resampling, truncation to a
// common length, vine-side classification, class means and curve distances.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "taunav/error.hpp"
#include "taunav/geometry.hpp"
#include "taunav/spline.hpp"

namespace taunav {

struct TrackPoint {
  double t{0.0};
  double x{0.0};
  double y{0.0};
  std::optional<double> z;
};

struct RawTrack {
  std::string id;
  std::vector<TrackPoint> points;

  void validate() const {
    if (points.size() < 4)
      throw DomainError("track '" + id + "' has " + std::to_string(points.size()) +
                        " points; at least 4 are required");
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
      if (!(points[i + 1].t > points[i].t))
        throw DomainError("track '" + id + "' time stamps must be strictly increasing");
  }
};

/// Plane a 3-D track is projected onto before planar analysis.
enum class ProjectionPlane { XY, XZ, YZ };

inline std::vector<Vec2> project(const RawTrack& track, ProjectionPlane plane = ProjectionPlane::XY) {
  std::vector<Vec2> out;
  out.reserve(track.points.size());
  for (const auto& p : track.points) {
    switch (plane) {
      case ProjectionPlane::XY:
        out.push_back({p.x, p.y});
        break;
      case ProjectionPlane::XZ:
      case ProjectionPlane::YZ:
        if (!p.z) throw DomainError("track '" + track.id + "' has no z column to project");
        out.push_back(plane == ProjectionPlane::XZ ? Vec2{p.x, *p.z} : Vec2{p.y, *p.z});
        break;
    }
  }
  return out;
}

/// Smooths a raw track. Both coordinates are smoothed against the cumulative
/// chord length of the projected samples.
inline SmoothingSpline fit_smoothing_spline(const RawTrack& track, double lambda,
                                            ProjectionPlane plane = ProjectionPlane::XY) {
  track.validate();
  const auto pts = project(track, plane);
  return fit_planar(pts, lambda);
}

// ---- arc length -------------------------------------------------------------

namespace detail {

inline constexpr std::array<double, 5> kGaussNodes = {0.1488743389816312, 0.4333953941292472,
                                                      0.6794095682990244, 0.8650633666889845,
                                                      0.9739065285171717};
inline constexpr std::array<double, 5> kGaussWeights = {0.2955242247147529, 0.2692667193099963,
                                                        0.2190863625159820, 0.1494513491505806,
                                                        0.0666713443086881};

template <class F>
double gauss10(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i)
    acc += kGaussWeights[i] * (f(c - r * kGaussNodes[i]) + f(c + r * kGaussNodes[i]));
  return acc * r;
}

template <class F>
double adaptive_gauss(F&& f, double a, double b, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss10(f, a, m);
  const double right = gauss10(f, m, b);
  if (depth <= 0 || std::abs(left + right - whole) <= tol) return left + right;
  return adaptive_gauss(f, a, m, left, 0.5 * tol, depth - 1) +
         adaptive_gauss(f, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// ∫ ‖μ'(s)‖ ds over [a, b] (a ≤ b).
inline double arc_length(const SmoothingSpline& sp, double a, double b) {
  if (b <= a) return 0.0;
  auto speed = [&](double s) { return norm(sp.tangent(s)); };
  double total = 0.0;
  const std::size_t i0 = sp.interval(a);
  const std::size_t i1 = sp.interval(b);
  for (std::size_t i = i0; i <= i1; ++i) {
    const double lo = std::max(a, sp.knots[i]);
    const double hi = std::min(b, sp.knots[i + 1]);
    if (hi <= lo) continue;
    const double whole = detail::gauss10(speed, lo, hi);
    total += detail::adaptive_gauss(speed, lo, hi, whole, 1e-14 * std::max(1.0, whole), 30);
  }
  return total;
}

inline double arc_length(const SmoothingSpline& sp) { return arc_length(sp, sp.front(), sp.back()); }

/// Parameter at which the arc length measured from sp.front() equals `length`.
inline double param_at_length(const SmoothingSpline& sp, double length) {
  if (length <= 0.0) return sp.front();
  double acc = 0.0;
  std::size_t i = 0;
  for (; i < sp.intervals(); ++i) {
    const double seg = arc_length(sp, sp.knots[i], sp.knots[i + 1]);
    if (acc + seg >= length) break;
    acc += seg;
  }
  if (i == sp.intervals()) return sp.back();
  double lo = sp.knots[i];
  double hi = sp.knots[i + 1];
  const double target = length - acc;
  double s = lo + (hi - lo) * 0.5;
  for (int it = 0; it < 100; ++it) {
    const double f = arc_length(sp, sp.knots[i], s) - target;
    if (f > 0.0) hi = s; else lo = s;
    const double sp_ = norm(sp.tangent(s));
    double next = sp_ > 0.0 ? s - f / sp_ : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15 * std::max(1.0, std::abs(s)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(s))) {
      s = next;
      break;
    }
    s = next;
  }
  return s;
}

// ---- arc-length curves --------------------------------------------------

/// Curve sampled at equal spacing along its length. Consecutive samples are
/// exactly equidistant (equal chords); total_length is the arc length of the
/// continuous curve they were taken from.
struct ArcCurve {
  std::vector<Vec2> samples;
  double total_length{0.0};

  std::size_t size() const { return samples.size(); }
  double spacing() const {
    return samples.size() < 2 ? 0.0 : distance(samples[1], samples[0]);
  }
};

namespace detail {

/// First parameter after `s_from` at which the curve is `chord` away from
/// `from`, or nullopt if the curve ends first.
inline std::optional<double> next_at_chord(const SmoothingSpline& sp, double s_from, Vec2 from,
                                           double chord, double s_end) {
  double s_lo = s_from;
  double s = s_from;
  while (true) {
    const double speed = std::max(norm(sp.tangent(s)), 1e-300);
    double s_next = std::min(s_end, s + 0.25 * chord / speed);
    if (!(s_next > s)) s_next = s_end;
    const double dist = distance(sp.point(s_next), from);
    if (dist >= chord) {
      double lo = s_lo;
      double hi = s_next;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        (distance(sp.point(m), from) >= chord ? hi : lo) = m;
      }
      return hi;
    }
    if (s_next >= s_end) return std::nullopt;
    s_lo = s_next;
    s = s_next;
  }
}

/// Shooting residual for chord c: how far the last free sample is from the
/// end point, minus c. Positive means c is too small.
inline double chord_residual(const SmoothingSpline& sp, double s0, double s1, std::size_t n,
                             double c, std::vector<double>* params) {
  double s = s0;
  Vec2 p = sp.point(s0);
  if (params) params->assign(1, s0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const auto nxt = next_at_chord(sp, s, p, c, s1);
    if (!nxt) return -std::numeric_limits<double>::infinity();
    s = *nxt;
    p = sp.point(s);
    if (params) params->push_back(s);
  }
  if (params) params->push_back(s1);
  return distance(sp.point(s1), p) - c;
}

}  // namespace detail

/// Resamples the spline restricted to [s0, s1] at n equidistant points.
inline ArcCurve arc_reparam(const SmoothingSpline& sp, double s0, double s1, std::size_t n) {
  if (n < 2) throw DomainError("arc_reparam needs at least two samples");
  if (sp.dimension() < 2) throw DomainError("arc_reparam needs a planar spline");
  const double length = arc_length(sp, s0, s1);
  if (!(length > 0.0)) throw DomainError("curve has zero length");
  ArcCurve out;
  out.total_length = length;
  if (n == 2) {
    out.samples = {sp.point(s0), sp.point(s1)};
    return out;
  }
  // Chords never exceed the arcs they subtend, so c ∈ (0, length/(n−1)].
  double lo = 0.0;
  double hi = length / static_cast<double>(n - 1);
  if (detail::chord_residual(sp, s0, s1, n, hi, nullptr) >= 0.0) {
    lo = hi;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (lo + hi);
      if (m <= lo || m >= hi) break;
      (detail::chord_residual(sp, s0, s1, n, m, nullptr) >= 0.0 ? lo : hi) = m;
    }
  }
  std::vector<double> params;
  detail::chord_residual(sp, s0, s1, n, lo, &params);
  for (double s : params) out.samples.push_back(sp.point(s));
  out.samples.back() = sp.point(s1);
  return out;
}

inline ArcCurve arc_reparam(const SmoothingSpline& sp, std::size_t n) {
  return arc_reparam(sp, sp.front(), sp.back(), n);
}

/// Interpolating spline through the samples of an arc curve.
inline SmoothingSpline interpolate(const ArcCurve& curve) {
  if (curve.samples.size() < 2) throw DomainError("curve needs at least two samples");
  return fit_planar(curve.samples, 1.0);
}

struct TruncationResult {
  std::vector<ArcCurve> kept;
  std::vector<std::size_t> kept_index;  // input position of each kept curve
  std::vector<std::size_t> rejected;    // input positions of curves shorter than L
};

/// Cuts every curve at arc length L from its first sample and resamples it
/// to n points (default: the first curve's sample count).
inline TruncationResult truncate_common(std::span<const ArcCurve> curves, double length,
                                        std::optional<std::size_t> n = std::nullopt) {
  if (!(length > 0.0)) throw DomainError("truncation length must be positive");
  TruncationResult res;
  const std::size_t count = n.value_or(curves.empty() ? 2 : curves.front().size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (curves[i].total_length < length) {
      res.rejected.push_back(i);
      continue;
    }
    const SmoothingSpline sp = interpolate(curves[i]);
    // The interpolant's length can differ from total_length in the last
    // digits; a curve that qualified by total_length is cut at its end.
    const double full = arc_length(sp);
    const double s_cut = full <= length ? sp.back() : param_at_length(sp, length);
    ArcCurve cut = arc_reparam(sp, sp.front(), s_cut, count);
    cut.total_length = length;
    res.kept.push_back(std::move(cut));
    res.kept_index.push_back(i);
  }
  return res;
}

// ---- classification -----------------------------------------------------

class UnclassifiableError : public Error {
 public:
  using Error::Error;
};

enum class Side { LeftOfVine, RightOfVine };

inline const char* to_string(Side s) { return s == Side::LeftOfVine ? "left" : "right"; }

struct SideLabel {
  Side side{Side::LeftOfVine};
  double penetration_depth{0.0};  // ≥ 0
  double closest_approach{0.0};   // distance to the vine at the closest sample
};

/// Signed distance to a polyline, positive on its left (for a woods edge
/// listed in flight order, the left is the woods side).
inline double signed_distance_to_polyline(Vec2 p, std::span<const Vec2> line) {
  if (line.size() < 2) throw DomainError("polyline needs at least two points");
  double best = std::numeric_limits<double>::infinity();
  double sign = 1.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const Vec2 a = line[i];
    const Vec2 ab = line[i + 1] - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q = a + ab * t;
    const double d = distance(p, q);
    if (d < best) {
      best = d;
      Vec2 dir = ab;
      // At a shared vertex use the bisector of the adjacent segments.
      if (t == 1.0 && i + 2 < line.size()) {
        const Vec2 bc = line[i + 2] - line[i + 1];
        dir = ab / std::sqrt(len2) + bc / norm(bc);
      } else if (t == 0.0 && i > 0) {
        const Vec2 prev = a - line[i - 1];
        dir = prev / norm(prev) + ab / std::sqrt(len2);
      }
      sign = cross(dir, p - q) >= 0.0 ? 1.0 : -1.0;
    }
  }
  return sign * best;
}

/// Which side of the vine the curve passed, relative to the flight direction
/// `reference_heading`, and how deep it went past the woods edge.
inline SideLabel classify_side(const ArcCurve& curve, Vec2 vine, Vec2 reference_heading,
                               std::span<const Vec2> woods_edge = {}) {
  if (curve.samples.empty()) throw UnclassifiableError("empty curve");
  if (norm(reference_heading) == 0.0) throw DomainError("reference heading must be nonzero");
  bool before = false;
  bool after = false;
  for (const auto& p : curve.samples) {
    const double along = dot(p - vine, reference_heading);
    before = before || along <= 0.0;
    after = after || (before && along >= 0.0);
  }
  if (!after) throw UnclassifiableError("curve never reaches the vine's transit line");
  std::size_t closest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const double d = distance(curve.samples[i], vine);
    if (d < best) {
      best = d;
      closest = i;
    }
  }
  SideLabel label;
  label.closest_approach = best;
  // Vine on the left of the direction of travel means the track went right of it.
  label.side = cross(reference_heading, vine - curve.samples[closest]) > 0.0 ? Side::RightOfVine
                                                                               : Side::LeftOfVine;
  if (woods_edge.size() >= 2) {
    double depth = 0.0;
    for (const auto& p : curve.samples) depth = std::max(depth, signed_distance_to_polyline(p, woods_edge));
    label.penetration_depth = depth;
  }
  return label;
}

// ---- means and distances -------------------------------------------------

namespace detail {
inline void require_matching(std::span<const ArcCurve> curves) {
  if (curves.empty()) throw DomainError("no curves to average");
  for (const auto& c : curves) {
    if (c.size() != curves.front().size())
      throw DomainError("curves have different sample counts");
    if (std::abs(c.total_length - curves.front().total_length) >
        1e-9 * std::max(1.0, curves.front().total_length))
      throw DomainError("curves have different lengths");
  }
  if (curves.front().size() < 2) throw DomainError("curves need at least two samples");
}
}  // namespace detail

/// Sample-by-sample arithmetic mean (before resampling).
inline std::vector<Vec2> pointwise_mean(std::span<const ArcCurve> curves) {
  detail::require_matching(curves);
  const std::size_t n = curves.front().size();
  std::vector<Vec2> mean(n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec2 acc;
    for (const auto& c : curves) acc += c.samples[j];
    mean[j] = acc / static_cast<double>(curves.size());
  }
  return mean;
}

/// Pointwise mean, resampled at equal spacing along its own length.
inline ArcCurve mean_trajectory(std::span<const ArcCurve> curves) {
  const auto mean = pointwise_mean(curves);
  const SmoothingSpline sp = fit_planar(mean, 1.0);
  return arc_reparam(sp, mean.size());
}

struct CurveDistance {
  double rms{0.0};
  double max{0.0};
};

/// Distances between samples at matching arc-length fractions. A curve with
/// fewer samples is resampled to the other's count first.
inline CurveDistance curve_distance(const ArcCurve& a, const ArcCurve& b) {
  if (a.samples.empty() || b.samples.empty()) throw DomainError("curve_distance on an empty curve");
  const ArcCurve* pa = &a;
  const ArcCurve* pb = &b;
  ArcCurve resampled;
  if (a.size() != b.size()) {
    const bool a_coarse = a.size() < b.size();
    const ArcCurve& coarse = a_coarse ? a : b;
    const ArcCurve& fine = a_coarse ? b : a;
    if (coarse.size() < 2) throw DomainError("cannot resample a single-point curve");
    resampled = arc_reparam(interpolate(coarse), fine.size());
    (a_coarse ? pa : pb) = &resampled;
  }
  CurveDistance out;
  double acc = 0.0;
  for (std::size_t i = 0; i < pa->size(); ++i) {
    const double d = distance(pa->samples[i], pb->samples[i]);
    acc += d * d;
    out.max = std::max(out.max, d);
  }
  out.rms = std::sqrt(acc / static_cast<double>(pa->size()));
  return out;
}

}  // namespace taunav
