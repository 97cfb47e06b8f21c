#pragma once

// Penalized cubic smoothing spline
//
//   min  λ·Σ (Y_i − μ(x_i))²  +  (1 − λ)·∫ μ''(x)² dx
//
// over natural cubic splines with knots at the data abscissae. λ weights
// fidelity: λ = 1 interpolates, λ = 0 is the least-squares line. Solved with
// the Reinsch construction (Q, R band matrices) in a form that stays
// well-posed at both ends of [0, 1]:
//
//   (λ·R + (1−λ)·QᵀQ)·η = QᵀY,   g = Y − (1−λ)·Q·η,   γ = λ·η
//
// where g are the knot values and γ the interior second derivatives.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "taunav/banded.hpp"
#include "taunav/error.hpp"
#include "taunav/geometry.hpp"

namespace taunav {

/// a + b·t + c·t² + d·t³ with t measured from the interval's left knot.
struct CubicPiece {
  double a{0.0};
  double b{0.0};
  double c{0.0};
  double d{0.0};

  double value(double t) const { return a + t * (b + t * (c + t * d)); }
  double first(double t) const { return b + t * (2.0 * c + 3.0 * t * d); }
  double second(double t) const { return 2.0 * c + 6.0 * t * d; }
};

struct SmoothingSpline {
  std::vector<double> knots;
  std::vector<std::vector<CubicPiece>> coefficients;  // [coordinate][interval]
  double lambda{1.0};

  std::size_t dimension() const { return coefficients.size(); }
  std::size_t intervals() const { return knots.empty() ? 0 : knots.size() - 1; }
  double front() const { return knots.front(); }
  double back() const { return knots.back(); }

  /// Interval containing s; values outside the knot range use the end pieces.
  std::size_t interval(double s) const {
    const auto it = std::upper_bound(knots.begin(), knots.end(), s);
    std::size_t i = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
    return std::min(i, intervals() - 1);
  }

  double value(std::size_t dim, double s) const {
    const std::size_t i = interval(s);
    return coefficients[dim][i].value(s - knots[i]);
  }
  double derivative(std::size_t dim, double s, int order = 1) const {
    const std::size_t i = interval(s);
    const CubicPiece& p = coefficients[dim][i];
    const double t = s - knots[i];
    switch (order) {
      case 0: return p.value(t);
      case 1: return p.first(t);
      case 2: return p.second(t);
      case 3: return 6.0 * p.d;
      default: return 0.0;
    }
  }

  Vec2 point(double s) const {
    const std::size_t i = interval(s);
    const double t = s - knots[i];
    return {coefficients[0][i].value(t), coefficients[1][i].value(t)};
  }
  Vec2 tangent(double s) const {
    const std::size_t i = interval(s);
    const double t = s - knots[i];
    return {coefficients[0][i].first(t), coefficients[1][i].first(t)};
  }
};

namespace detail {

inline void check_abscissae(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("smoothing spline needs at least two abscissae");
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(x[i + 1]))
      throw DomainError("abscissae must be finite");
    if (!(x[i + 1] > x[i]))
      throw DomainError("abscissae must be strictly increasing (duplicate or reversed at index " +
                        std::to_string(i + 1) + ")");
  }
}

inline std::vector<CubicPiece> pieces_from(std::span<const double> x, const std::vector<double>& g,
                                           const std::vector<double>& gamma) {
  std::vector<CubicPiece> out(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    out[i].a = g[i];
    out[i].b = (g[i + 1] - g[i]) / h - h * (2.0 * gamma[i] + gamma[i + 1]) / 6.0;
    out[i].c = gamma[i] / 2.0;
    out[i].d = (gamma[i + 1] - gamma[i]) / (6.0 * h);
  }
  return out;
}

/// Knot values and second derivatives of the 1-D fit.
inline std::vector<CubicPiece> fit_column(std::span<const double> x, std::span<const double> y,
                                          double lambda) {
  const std::size_t n = x.size();
  std::vector<double> g(y.begin(), y.end());
  std::vector<double> gamma(n, 0.0);
  if (n >= 3) {
    const std::size_t m = n - 2;
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];
    // Column j (interior knot j = c + 1) of Q has entries at rows j-1, j, j+1.
    auto q = [&](std::size_t c, int row_offset) {
      const std::size_t j = c + 1;
      if (row_offset == -1) return 1.0 / h[j - 1];
      if (row_offset == 0) return -1.0 / h[j - 1] - 1.0 / h[j];
      return 1.0 / h[j];
    };
    SymmetricPentadiagonal a(m);
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t j = c + 1;
      const double qm = q(c, -1), q0 = q(c, 0), qp = q(c, 1);
      const double qtq_cc = qm * qm + q0 * q0 + qp * qp;
      a.diag[c] = lambda * (h[j - 1] + h[j]) / 3.0 + (1.0 - lambda) * qtq_cc;
      if (c + 1 < m) {
        // columns c and c+1 overlap on rows j and j+1
        const double qtq = q0 * q(c + 1, -1) + qp * q(c + 1, 0);
        a.off1[c] = lambda * h[j] / 6.0 + (1.0 - lambda) * qtq;
      }
      if (c + 2 < m) a.off2[c] = (1.0 - lambda) * qp * q(c + 2, -1);
    }
    std::vector<double> rhs(m);
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t j = c + 1;
      rhs[c] = (y[j + 1] - y[j]) / h[j] - (y[j] - y[j - 1]) / h[j - 1];
    }
    const std::vector<double> eta = solve(a, std::move(rhs));
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t j = c + 1;
      const double w = (1.0 - lambda) * eta[c];
      g[j - 1] -= w * q(c, -1);
      g[j] -= w * q(c, 0);
      g[j + 1] -= w * q(c, 1);
      gamma[j] = lambda * eta[c];
    }
  }
  return pieces_from(x, g, gamma);
}

}  // namespace detail

/// Fits every column independently against the shared abscissae.
inline SmoothingSpline fit_smoothing_spline(std::span<const double> abscissae,
                                            const std::vector<std::vector<double>>& columns,
                                            double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  detail::check_abscissae(abscissae);
  SmoothingSpline sp;
  sp.knots.assign(abscissae.begin(), abscissae.end());
  sp.lambda = lambda;
  for (const auto& col : columns) {
    if (col.size() != abscissae.size()) throw DomainError("column length differs from abscissae");
    for (double v : col)
      if (!std::isfinite(v)) throw DomainError("data must be finite");
    sp.coefficients.push_back(detail::fit_column(abscissae, col, lambda));
  }
  return sp;
}

/// Cumulative chord length of a polyline, starting at zero.
inline std::vector<double> chord_abscissae(std::span<const Vec2> pts) {
  std::vector<double> s(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) s[i] = s[i - 1] + distance(pts[i], pts[i - 1]);
  return s;
}

/// Planar spline through (or near, for λ < 1) the points, parameterized by
/// cumulative chord length.
inline SmoothingSpline fit_planar(std::span<const Vec2> pts, double lambda) {
  std::vector<std::vector<double>> cols(2);
  for (const auto& p : pts) {
    cols[0].push_back(p.x);
    cols[1].push_back(p.y);
  }
  const auto s = chord_abscissae(pts);
  return fit_smoothing_spline(s, cols, lambda);
}

/// ∫ μ''² over the knot range for one coordinate (μ'' is piecewise linear).
inline double roughness(const SmoothingSpline& sp, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < sp.intervals(); ++i) {
    const double h = sp.knots[i + 1] - sp.knots[i];
    const CubicPiece& p = sp.coefficients[dim][i];
    const double g0 = p.second(0.0);
    const double g1 = p.second(h);
    acc += h * (g0 * g0 + g0 * g1 + g1 * g1) / 3.0;
  }
  return acc;
}

/// Σ (Y_i − μ(x_i))² for one coordinate.
inline double fidelity(const SmoothingSpline& sp, std::size_t dim, std::span<const double> x,
                       std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - sp.value(dim, x[i]);
    acc += r * r;
  }
  return acc;
}

/// Objective value summed over coordinates.
inline double smoothing_objective(const SmoothingSpline& sp, std::span<const double> x,
                                  const std::vector<std::vector<double>>& columns, double lambda) {
  double acc = 0.0;
  for (std::size_t d = 0; d < columns.size(); ++d)
    acc += lambda * fidelity(sp, d, x, columns[d]) + (1.0 - lambda) * roughness(sp, d);
  return acc;
}

}  // namespace taunav
