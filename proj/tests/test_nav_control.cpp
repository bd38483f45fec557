/*
 * Copyright 2026 The harvest_nav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "harvest_nav/nav_control.hpp"
#include "harvest_nav/reeds_shepp.hpp"

using namespace harvest;

namespace {

PathSE2 straight_path(double length, Direction dir, double step = 0.1) {
  std::vector<Pose2d> poses;
  const int n = static_cast<int>(std::round(length / step));
  for (int i = 0; i <= n; ++i) poses.emplace_back(sign_of(dir) * i * step, 0.0, 0.0);
  return PathSE2(poses, std::vector<Direction>(poses.size() - 1, dir));
}

double joint_cost(const WheelAngles& a, const WheelAngles& b) {
  double f = 0.0;
  for (int i = 0; i < 4; ++i) f += (a[i] - b[i]) * (a[i] - b[i]);
  return f;
}

}  // namespace

TEST(Ackermann, HandComputedAngles) {
  const VehicleModel m;
  const WheelAngles a = icr_wheel_angles(0.1, m);
  EXPECT_NEAR(a[0], std::atan(0.2 / 0.88), 1e-12);
  EXPECT_NEAR(a[1], std::atan(0.2 / 1.12), 1e-12);
  EXPECT_NEAR(a[2], -std::atan(0.2 / 0.88), 1e-12);
  EXPECT_NEAR(a[3], -std::atan(0.2 / 1.12), 1e-12);
  for (double v : icr_wheel_angles(0.0, m)) EXPECT_EQ(v, 0.0);
}

TEST(Ackermann, WheelsRollAroundCommonIcr) {
  const VehicleModel m;
  const auto wheels = m.wheel_positions();
  for (int k = -20; k <= 20; ++k) {
    if (k == 0) continue;
    const double kappa = k / (20.0 * m.min_turn_radius);
    const AckermannSolution s = ackermann_solve(kappa, m);
    EXPECT_FALSE(s.limited);
    const Eigen::Vector2d icr(0.0, 1.0 / s.curvature);
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector2d roll(std::cos(s.angles[i]), std::sin(s.angles[i]));
      EXPECT_NEAR(roll.dot((wheels[i] - icr).normalized()), 0.0, 1e-9) << "wheel " << i << " k " << kappa;
    }
  }
}

TEST(Ackermann, MirrorSymmetry) {
  const VehicleModel m;
  for (double kappa : {0.01, 0.05, 0.1, 0.12}) {
    const WheelAngles p = icr_wheel_angles(kappa, m), n = icr_wheel_angles(-kappa, m);
    EXPECT_NEAR(p[0], -n[1], 1e-12);
    EXPECT_NEAR(p[1], -n[0], 1e-12);
    EXPECT_NEAR(p[2], -n[3], 1e-12);
    EXPECT_NEAR(p[3], -n[2], 1e-12);
  }
}

TEST(Ackermann, LimitedSolutionMatchesGridSearch) {
  VehicleModel m;
  m.steering_limit = 0.1;
  for (double kappa : {0.06, -0.08, 0.1, 1.0 / 8.3}) {
    const AckermannSolution s = ackermann_solve(kappa, m);
    ASSERT_TRUE(s.limited);
    const WheelAngles desired = icr_wheel_angles(kappa, m);
    for (double v : s.angles) EXPECT_LE(std::abs(v), m.steering_limit + 1e-9);
    double best = std::numeric_limits<double>::infinity();
    const int n = 200000;
    for (int i = 0; i <= n; ++i) {
      const double c = (-1.0 + 2.0 * i / n) / m.min_turn_radius;
      const WheelAngles a = icr_wheel_angles(c, m);
      bool ok = true;
      for (double v : a) ok = ok && std::abs(v) <= m.steering_limit;
      if (ok) best = std::min(best, joint_cost(a, desired));
    }
    EXPECT_LE(joint_cost(s.angles, desired), best + 1e-9) << kappa;
    EXPECT_GT(s.curvature * kappa, 0.0);
  }
}

TEST(Ackermann, RejectsExcessCurvature) {
  const VehicleModel m;
  EXPECT_THROW(ackermann_solve(1.01 / m.min_turn_radius, m), std::invalid_argument);
  EXPECT_NO_THROW(ackermann_solve(1.0 / m.min_turn_radius, m));
  VehicleModel bad;
  bad.min_turn_radius = 2.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_NO_THROW(m.validate());
}

TEST(PurePursuit, ChordCurvature) {
  const double L = 3.0;
  for (double alpha : {-0.3, -0.1, 0.05, 0.2}) {
    const Eigen::Vector2d p(L * std::cos(alpha), L * std::sin(alpha));
    const double k = pure_pursuit_curvature(p, 1.0);
    EXPECT_NEAR(k, 2.0 * std::sin(alpha) / L, 1e-12);
    // The arc tangent to the body x axis through the origin reaches p.
    const Eigen::Vector2d center(0.0, 1.0 / k);
    EXPECT_NEAR((p - center).norm(), std::abs(1.0 / k), 1e-9);
  }
  EXPECT_DOUBLE_EQ(pure_pursuit_curvature({0.0, 3.0}, 8.3), 1.0 / 8.3);
  EXPECT_DOUBLE_EQ(pure_pursuit_curvature({0.0, -3.0}, 8.3), -1.0 / 8.3);
  EXPECT_EQ(pure_pursuit_curvature({3.0, 0.0}, 8.3), 0.0);
}

TEST(PurePursuit, ReverseCommandSteersTowardPath) {
  // Reversing along -x with the path offset to the left (+y): the rear has to
  // swing left; lateral offset goes as k s^2 / 2 for either sign of s.
  std::vector<Pose2d> poses;
  for (int i = 0; i <= 100; ++i) poses.emplace_back(-0.1 * i, 0.5, 0.0);
  PurePursuit pp(PathSE2(poses, std::vector<Direction>(100, Direction::kReverse)), {});
  const PursuitCommand cmd = pp.update({0.0, 0.0, 0.0});
  EXPECT_FALSE(cmd.complete);
  EXPECT_GT(cmd.curvature, 0.0);
  const Pose2d after = integrate_arc({0.0, 0.0, 0.0}, cmd.curvature, -1.0);
  EXPECT_GT(after.y(), 0.0);
}

TEST(IntegrateArc, MatchesFineEuler) {
  for (double k : {0.0, 0.1, -0.12}) {
    for (double ds : {1.5, -2.0}) {
      Pose2d p(1.0, 2.0, 0.3);
      const int n = 100000;
      for (int i = 0; i < n; ++i) {
        const double h = ds / n;
        p = Pose2d(p.x() + h * std::cos(p.yaw() + 0.5 * k * h), p.y() + h * std::sin(p.yaw() + 0.5 * k * h),
                   p.yaw() + k * h);
      }
      const Pose2d q = integrate_arc({1.0, 2.0, 0.3}, k, ds);
      EXPECT_NEAR(q.x(), p.x(), 1e-9);
      EXPECT_NEAR(q.y(), p.y(), 1e-9);
      EXPECT_NEAR(q.yaw(), p.yaw(), 1e-9);
    }
  }
}

TEST(Tracking, StraightForwardAndReverse) {
  for (Direction dir : {Direction::kForward, Direction::kReverse}) {
    const TrackingResult r = simulate_tracking(straight_path(50.0, dir), VehicleModel{}, TrackerParams{});
    EXPECT_TRUE(r.completed);
    EXPECT_FALSE(r.stalled);
    EXPECT_LT(r.mean_cross_track, 0.01);
    EXPECT_NEAR(r.distance_traveled, 50.0, 0.1);
    EXPECT_NEAR(r.final_pose.x(), sign_of(dir) * 50.0, 0.05);
    EXPECT_EQ(r.cusps, 0);
    EXPECT_NEAR(dir == Direction::kForward ? r.length_forward : r.length_reverse, 50.0, 0.1);
  }
}

TEST(Tracking, ConvergesFromLateralOffset) {
  for (Direction dir : {Direction::kForward, Direction::kReverse}) {
    TrackingConfig cfg;
    cfg.start = Pose2d(0.0, 0.4, 0.0);
    const TrackingResult r = simulate_tracking(straight_path(50.0, dir), VehicleModel{}, TrackerParams{}, cfg);
    ASSERT_TRUE(r.completed);
    EXPECT_LT(std::abs(r.final_pose.y()), 0.05);
    EXPECT_LT(r.trajectory.back().cross_track, r.trajectory.front().cross_track);
  }
}

TEST(Tracking, CuspedManeuverCompletes) {
  const PathSE2 path = reeds_shepp_connect({0.0, 0.0, 0.0}, {2.0, 4.0, 0.0}, 8.3);
  ASSERT_GE(path.cusp_count(), 1);
  const TrackingResult r = simulate_tracking(path, VehicleModel{}, TrackerParams{});
  EXPECT_TRUE(r.completed);
  EXPECT_EQ(r.cusps, path.cusp_count());
  EXPECT_GT(r.length_forward, 0.0);
  EXPECT_GT(r.length_reverse, 0.0);
  EXPECT_LT(planar_distance(r.final_pose, path.back()), 0.5);
  EXPECT_LT(r.mean_cross_track, 0.25);
}

TEST(Tracking, TimeStepRefinementAgrees) {
  const PathSE2 path = reeds_shepp_connect({0.0, 0.0, 0.0}, {20.0, 10.0, 1.2}, 8.3);
  TrackingConfig coarse, fine;
  fine.dt = coarse.dt / 10.0;
  const TrackingResult a = simulate_tracking(path, VehicleModel{}, TrackerParams{}, coarse);
  const TrackingResult b = simulate_tracking(path, VehicleModel{}, TrackerParams{}, fine);
  ASSERT_TRUE(a.completed && b.completed);
  EXPECT_NEAR(a.mean_cross_track, b.mean_cross_track, 0.01);
  EXPECT_LT(planar_distance(a.final_pose, b.final_pose), 0.1);
  EXPECT_NEAR(a.duration, b.duration, 0.5);
}

TEST(Tracking, SlipIncreasesError) {
  const PathSE2 path = straight_path(30.0, Direction::kForward);
  double prev = -1.0;
  for (double slip : {0.0, 0.02, 0.05, 0.1}) {
    TrackingConfig cfg;
    cfg.slip = slip;
    const TrackingResult r = simulate_tracking(path, VehicleModel{}, TrackerParams{}, cfg);
    EXPECT_TRUE(r.completed);
    EXPECT_GE(r.mean_cross_track, prev);
    prev = r.mean_cross_track;
  }
  EXPECT_GT(prev, 0.05);
}

TEST(Tracking, StallIsDetected) {
  TrackingConfig cfg;
  cfg.slip = 0.6;
  cfg.slip_direction = Eigen::Vector2d(-1.0, 0.0);
  cfg.stall_window = 5.0;
  const TrackingResult r = simulate_tracking(straight_path(20.0, Direction::kForward), VehicleModel{},
                                             TrackerParams{}, cfg);
  EXPECT_FALSE(r.completed);
  EXPECT_TRUE(r.stalled);
  EXPECT_LE(r.duration, 5.0 + 0.1);
}

TEST(Tracking, SinglePoseIsTriviallyComplete) {
  const PathSE2 path({Pose2d(1.0, 1.0, 0.0)}, {});
  const TrackingResult r = simulate_tracking(path, VehicleModel{}, TrackerParams{});
  EXPECT_TRUE(r.completed);
  EXPECT_EQ(r.duration, 0.0);
  EXPECT_THROW(simulate_tracking(PathSE2{}, VehicleModel{}, TrackerParams{}), std::invalid_argument);
}
