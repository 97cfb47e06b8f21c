#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "taunav/sensing.hpp"

using namespace taunav;

namespace {

struct Config {
  Pose pose;
  Feature feature;
  double f;
  double v;
};

// Random pose and a feature far enough to the side to be visible.
Config random_config(std::mt19937_64& g) {
  const Pose pose{oracle::uniform(g, -10, 10), oracle::uniform(g, -10, 10), oracle::uniform(g, -3.1, 3.1)};
  const double f = oracle::uniform(g, 0.01, 0.5);
  const double ahead = oracle::uniform(g, -20, 20);
  const double side = (oracle::uniform(g, 0, 1) < 0.5 ? -1.0 : 1.0) * oracle::uniform(g, f + 0.1, 20);
  const double c = std::cos(pose.theta), s = std::sin(pose.theta);
  const Feature feat{"F", pose.x + ahead * c - side * s, pose.y + ahead * s + side * c};
  return {pose, feat, f, oracle::uniform(g, 0.1, 5.0)};
}

}  // namespace

TEST(TauGeometric, FeatureAheadOnTheFlightLine) {
  const Pose p{0, 0, 0};
  EXPECT_DOUBLE_EQ(tau_geometric(p, Feature{"F", 5, 0}, 2.0), 2.5);
  EXPECT_DOUBLE_EQ(tau_geometric(p, Feature{"F", -3, 4}, 1.0), -3.0);
}

TEST(TauGeometric, RotatedPose) {
  const Pose p{1, 1, std::numbers::pi / 2};
  EXPECT_NEAR(tau_geometric(p, Feature{"F", 3, 5}, 2.0), 2.0, 1e-15);
}

TEST(TauGeometric, NonPositiveSpeedIsDomainError) {
  EXPECT_THROW(tau_geometric(Pose{}, Feature{"F", 1, 1}, 0.0), DomainError);
  EXPECT_THROW(tau_geometric(Pose{}, Feature{"F", 1, 1}, -1.0), DomainError);
  EXPECT_THROW(tau_dtheta(Pose{}, Feature{"F", 1, 1}, 0.0), DomainError);
}

TEST(TauDtheta, MatchesFiniteDifference) {
  auto g = oracle::rng(11);
  for (int i = 0; i < 200; ++i) {
    const Config c = random_config(g);
    const double h = 1e-6;
    const double fd = (tau_geometric(Pose{c.pose.x, c.pose.y, c.pose.theta + h}, c.feature, c.v) -
                       tau_geometric(Pose{c.pose.x, c.pose.y, c.pose.theta - h}, c.feature, c.v)) /
                      (2 * h);
    EXPECT_NEAR(tau_dtheta(c.pose, c.feature, c.v), fd, 1e-6 * (1 + std::abs(fd)));
  }
}

TEST(ImageCoordinate, MatchesRayTrace) {
  auto g = oracle::rng(12);
  for (int i = 0; i < 500; ++i) {
    const Config c = random_config(g);
    const CameraSide side = facing_side(c.pose, c.feature);
    const double d_i = project_feature(c.pose, c.feature, Camera{c.f, side});
    const double ref = oracle::ray_trace_image(c.pose.x, c.pose.y, c.pose.theta, c.feature.x_w, c.feature.y_w,
                                               c.f, side == CameraSide::Left);
    EXPECT_NEAR(d_i, ref, 1e-9 * (1 + std::abs(ref)));
  }
}

TEST(ImageCoordinate, FeatureAheadImagesNegative) {
  EXPECT_LT(image_coordinate(3.0, 2.0, 0.1), 0.0);
  EXPECT_GT(image_coordinate(-3.0, 2.0, 0.1), 0.0);
}

TEST(ImageCoordinate, NotVisibleInsideFocalDistance) {
  EXPECT_THROW(image_coordinate(1.0, 0.05, 0.1), NotVisibleError);
  EXPECT_THROW(image_coordinate(1.0, 0.1, 0.1), NotVisibleError);
  EXPECT_THROW(image_coordinate(1.0, -2.0, 0.1), NotVisibleError);
  // A feature on the other side is invisible to this camera.
  EXPECT_THROW(project_feature(Pose{}, Feature{"F", 2, 3}, Camera{0.1, CameraSide::Right}), NotVisibleError);
}

TEST(ImageFlow, MatchesFiniteDifferenceOfRayTrace) {
  auto g = oracle::rng(13);
  for (int i = 0; i < 200; ++i) {
    const Config c = random_config(g);
    const double u = oracle::uniform(g, -0.5, 0.5);
    const CameraSide side = facing_side(c.pose, c.feature);
    const ImageObservation obs = image_flow(c.pose, c.v, u, c.feature, Camera{c.f, side});
    // Exact unicycle motion with constant u over ±h.
    auto pose_at = [&](double t) {
      if (u == 0.0)
        return std::array<double, 3>{c.pose.x + c.v * t * std::cos(c.pose.theta),
                                     c.pose.y + c.v * t * std::sin(c.pose.theta), c.pose.theta};
      const double th = c.pose.theta + u * t;
      return std::array<double, 3>{c.pose.x + c.v / u * (std::sin(th) - std::sin(c.pose.theta)),
                                   c.pose.y - c.v / u * (std::cos(th) - std::cos(c.pose.theta)), th};
    };
    auto img = [&](double t) {
      const auto q = pose_at(t);
      return oracle::ray_trace_image(q[0], q[1], q[2], c.feature.x_w, c.feature.y_w, c.f,
                                     side == CameraSide::Left);
    };
    const double h = 1e-5;
    const double fd = (img(h) - img(-h)) / (2 * h);
    EXPECT_NEAR(obs.d_i_dot, fd, 1e-5 * (1 + std::abs(fd)));
  }
}

TEST(ImageTau, ExampleObservation) {
  EXPECT_DOUBLE_EQ(image_tau(ImageObservation{-2.0, 1.0}), 2.0);
}

TEST(ImageTau, EqualsGeometricTauInStraightFlight) {
  auto g = oracle::rng(14);
  for (int i = 0; i < 1000; ++i) {
    const Config c = random_config(g);
    const ImageObservation obs = image_flow(c.pose, c.v, 0.0, c.feature, Camera{c.f, facing_side(c.pose, c.feature)});
    const double tau = tau_geometric(c.pose, c.feature, c.v);
    EXPECT_NEAR(image_tau(obs), tau, 1e-9 * (1 + std::abs(tau)));
  }
}

TEST(ImageTau, IndependentOfLateralDistance) {
  const Pose p{0, 0, 0};
  const Camera cam{0.2, CameraSide::Left};
  const double t1 = image_tau(image_flow(p, 1.5, 0.0, Feature{"F", 6, 2}, cam));
  const double t2 = image_tau(image_flow(p, 1.5, 0.0, Feature{"F", 6, 4}, cam));
  EXPECT_NEAR(t1, t2, 1e-12);
  // and proportional to the longitudinal offset
  const double t3 = image_tau(image_flow(p, 1.5, 0.0, Feature{"F", 12, 2}, cam));
  EXPECT_NEAR(t3, 2 * t1, 1e-12);
}

TEST(ImageTau, IndeterminateFlow) {
  EXPECT_THROW(image_tau(ImageObservation{-1.0, 0.0}), IndeterminateFlowError);
  EXPECT_THROW(image_tau(ImageObservation{-1.0, 1e-13}), IndeterminateFlowError);
  EXPECT_NO_THROW(image_tau(ImageObservation{-1.0, 1e-13}, 1e-14));
}

TEST(FacingSide, LeftAndRight) {
  const Pose p{0, 0, 0};
  EXPECT_EQ(facing_side(p, Feature{"F", 1, 1}), CameraSide::Left);
  EXPECT_EQ(facing_side(p, Feature{"F", 1, -1}), CameraSide::Right);
}
