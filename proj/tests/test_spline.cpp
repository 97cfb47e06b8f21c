#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "taunav/banded.hpp"
#include "taunav/spline.hpp"

using namespace taunav;

namespace {

struct Instance {
  std::vector<double> x;
  std::vector<double> y;
};

Instance random_instance(std::mt19937_64& g, std::size_t n) {
  Instance in;
  double x = oracle::uniform(g, -2, 2);
  for (std::size_t i = 0; i < n; ++i) {
    in.x.push_back(x);
    in.y.push_back(oracle::uniform(g, -3, 3));
    x += oracle::uniform(g, 0.2, 2.0);
  }
  return in;
}

SmoothingSpline fit1(const Instance& in, double lambda) { return fit_smoothing_spline(in.x, {in.y}, lambda); }

}  // namespace

TEST(Banded, MatchesDenseSolve) {
  auto g = oracle::rng(41);
  for (std::size_t n : {1u, 2u, 3u, 8u, 40u}) {
    SymmetricPentadiagonal a(n);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      a.diag[i] = oracle::uniform(g, 4, 6);
      dense(i, i) = a.diag[i];
      if (i + 1 < n) {
        a.off1[i] = oracle::uniform(g, -1, 1);
        dense(i, i + 1) = dense(i + 1, i) = a.off1[i];
      }
      if (i + 2 < n) {
        a.off2[i] = oracle::uniform(g, -1, 1);
        dense(i, i + 2) = dense(i + 2, i) = a.off2[i];
      }
    }
    std::vector<double> b(n);
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = b[i] = oracle::uniform(g, -1, 1);
    const auto x = solve(a, b);
    const Eigen::VectorXd ref = dense.ldlt().solve(rhs);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[i], 1e-12);
  }
}

TEST(Banded, IndefiniteMatrixRejected) {
  SymmetricPentadiagonal a(2);
  a.diag = {1.0, 1.0};
  a.off1 = {2.0};
  EXPECT_THROW(solve(a, {1.0, 1.0}), NumericError);
}

TEST(SmoothingSpline, LambdaOneInterpolates) {
  auto g = oracle::rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const Instance in = random_instance(g, 3 + rep);
    const SmoothingSpline sp = fit1(in, 1.0);
    for (std::size_t i = 0; i < in.x.size(); ++i) EXPECT_NEAR(sp.value(0, in.x[i]), in.y[i], 1e-9);
  }
}

TEST(SmoothingSpline, ContinuityAndNaturalEnds) {
  auto g = oracle::rng(43);
  const Instance in = random_instance(g, 9);
  for (double lambda : {0.0, 0.3, 0.85, 1.0}) {
    const SmoothingSpline sp = fit1(in, lambda);
    for (std::size_t i = 1; i + 1 < in.x.size(); ++i) {
      const double h = in.x[i] - in.x[i - 1];
      const CubicPiece& l = sp.coefficients[0][i - 1];
      const CubicPiece& r = sp.coefficients[0][i];
      EXPECT_NEAR(l.value(h), r.value(0), 1e-9);
      EXPECT_NEAR(l.first(h), r.first(0), 1e-9);
      EXPECT_NEAR(l.second(h), r.second(0), 1e-9);
    }
    EXPECT_NEAR(sp.derivative(0, sp.front(), 2), 0.0, 1e-12);
    EXPECT_NEAR(sp.derivative(0, sp.back(), 2), 0.0, 1e-9);
  }
}

TEST(SmoothingSpline, LambdaZeroIsLeastSquaresLine) {
  auto g = oracle::rng(44);
  Instance in;
  for (int i = 0; i < 25; ++i) {
    const double x = i * 0.4 + oracle::uniform(g, 0, 0.1);
    in.x.push_back(x);
    in.y.push_back(2 * x + 1 + oracle::uniform(g, -0.5, 0.5));
  }
  // Normal equations for the analytic line.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(in.x.size());
  for (std::size_t i = 0; i < in.x.size(); ++i) {
    sx += in.x[i];
    sy += in.y[i];
    sxx += in.x[i] * in.x[i];
    sxy += in.x[i] * in.y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  const SmoothingSpline sp = fit1(in, 0.0);
  for (double x = in.x.front(); x <= in.x.back(); x += 0.05) {
    EXPECT_NEAR(sp.value(0, x), slope * x + icpt, 1e-9);
    EXPECT_NEAR(sp.derivative(0, x, 2), 0.0, 1e-9);
  }
}

TEST(SmoothingSpline, MatchesDenseQuadraticProgram) {
  auto g = oracle::rng(45);
  for (int rep = 0; rep < 20; ++rep) {
    const Instance in = random_instance(g, 7);
    const SmoothingSpline sp = fit1(in, 0.85);
    const auto qp = oracle::smoothing_qp(in.x, in.y, 0.85);
    const double obj = smoothing_objective(sp, in.x, {in.y}, 0.85);
    EXPECT_NEAR(obj, qp.objective, 1e-8 * qp.objective);
    for (std::size_t i = 0; i < in.x.size(); ++i) EXPECT_NEAR(sp.value(0, in.x[i]), qp.fitted[i], 1e-7);
  }
}

TEST(SmoothingSpline, OptimalAgainstPerturbations) {
  auto g = oracle::rng(46);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 4 + rep % 7;
    const Instance in = random_instance(g, n);
    for (double lambda : {0.2, 0.85}) {
      const SmoothingSpline sp = fit1(in, lambda);
      const double best = smoothing_objective(sp, in.x, {in.y}, lambda);
      EXPECT_NEAR(best, oracle::smoothing_qp(in.x, in.y, lambda).objective, 1e-8 * best);
      // Any natural spline is determined by its knot values.
      std::vector<double> knots(n);
      for (std::size_t i = 0; i < n; ++i) knots[i] = sp.value(0, in.x[i]);
      for (int k = 0; k < 20; ++k) {
        std::vector<double> pert = knots;
        for (auto& v : pert) v += oracle::uniform(g, -1e-3, 1e-3);
        const SmoothingSpline other = fit_smoothing_spline(in.x, {pert}, 1.0);
        EXPECT_GE(smoothing_objective(other, in.x, {in.y}, lambda), best - 1e-12);
      }
    }
  }
}

TEST(SmoothingSpline, FidelityNonIncreasingInLambda) {
  auto g = oracle::rng(47);
  const Instance in = random_instance(g, 12);
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 20; ++i) {
    const double lambda = i / 20.0;
    const double fid = fidelity(fit1(in, lambda), 0, in.x, in.y);
    EXPECT_LE(fid, prev + 1e-12);
    prev = fid;
  }
}

TEST(SmoothingSpline, RoughnessMatchesQuadrature) {
  auto g = oracle::rng(48);
  const Instance in = random_instance(g, 8);
  const SmoothingSpline sp = fit1(in, 0.6);
  // Composite Simpson on each interval (exact for the quadratic integrand).
  double acc = 0;
  for (std::size_t i = 0; i + 1 < in.x.size(); ++i) {
    const double a = in.x[i], b = in.x[i + 1], m = 0.5 * (a + b);
    auto f = [&](double x) { return std::pow(sp.derivative(0, x, 2), 2); };
    acc += (b - a) / 6 * (f(a) + 4 * f(m) + f(b - 1e-15));
  }
  EXPECT_NEAR(roughness(sp, 0), acc, 1e-9 * (1 + acc));
}

TEST(SmoothingSpline, DomainErrors) {
  const std::vector<double> x{0, 1, 1, 2};
  const std::vector<double> y{0, 1, 2, 3};
  EXPECT_THROW(fit_smoothing_spline(x, {y}, 0.5), DomainError);
  const std::vector<double> ok{0, 1, 2, 3};
  EXPECT_THROW(fit_smoothing_spline(ok, {y}, 1.5), DomainError);
  EXPECT_THROW(fit_smoothing_spline(ok, {y}, -0.1), DomainError);
  EXPECT_THROW(fit_smoothing_spline(ok, {std::vector<double>{0, 1}}, 0.5), DomainError);
}

TEST(SmoothingSpline, TwoPointsGiveSegment) {
  const std::vector<double> x{0, 2};
  const SmoothingSpline sp = fit_smoothing_spline(x, {{1, 5}}, 0.4);
  EXPECT_NEAR(sp.value(0, 1.0), 3.0, 1e-15);
}
