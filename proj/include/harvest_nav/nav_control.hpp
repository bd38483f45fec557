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

#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "harvest_nav/geometry.hpp"
#include "harvest_nav/path.hpp"

namespace harvest {

struct VehicleModel {
  double wheelbase = 4.0;
  double track = 2.4;
  double steering_limit = 0.61;  // rad, per joint
  double max_speed = 1.0;
  double min_turn_radius = 8.3;

  /// Body-frame wheel positions: front-left, front-right, rear-left, rear-right.
  std::array<Eigen::Vector2d, 4> wheel_positions() const;
  /// Throws std::invalid_argument on non-positive sizes or a turning radius
  /// below wheelbase / tan(steering_limit).
  void validate() const;
};

/// Steering angle per wheel (same order as wheel_positions()).
using WheelAngles = std::array<double, 4>;

/// Angles that point every wheel's rolling direction perpendicular to the ray
/// from the ICR at body (0, 1/curvature). With curvature 0 all angles are 0.
WheelAngles icr_wheel_angles(double curvature, const VehicleModel& model);

struct AckermannSolution {
  WheelAngles angles{};
  double curvature = 0.0;  // curvature the returned angles realize
  bool limited = false;
};

/// Common-ICR steering. If a joint limit is violated, returns the feasible
/// common-ICR set minimizing sum_i (angle_i - desired_i)^2 over the ICR offset.
/// Throws std::invalid_argument if |curvature| > 1 / min_turn_radius.
AckermannSolution ackermann_solve(double curvature, const VehicleModel& model);

struct TrackerParams {
  double lookahead = 3.0;
  /// Within `lookahead` of a run end the lookahead shrinks to the remaining
  /// distance, but not below this.
  double min_lookahead = 1.0;
  double speed = 0.5;
  double min_turn_radius = 8.3;
  /// A run counts as finished when the vehicle is this close to its end
  /// (or has passed it).
  double goal_tolerance = 0.05;
};

struct TrackerState {
  Pose2d pose;
  double path_param = 0.0;  // arc length progress within the current run
  std::size_t run = 0;
  Direction direction = Direction::kForward;
  double lookahead = 3.0;
};

struct PursuitCommand {
  double curvature = 0.0;
  bool complete = false;
  Eigen::Vector2d lookahead_point = Eigen::Vector2d::Zero();
};

/// Pure-pursuit tracker over the direction runs of a path.
class PurePursuit {
 public:
  PurePursuit(PathSE2 path, TrackerParams params);

  /// Updates progress from `pose` and returns the curvature command
  /// (positive = left, forward-motion convention).
  PursuitCommand update(const Pose2d& pose);

  const TrackerState& state() const { return state_; }
  bool complete() const { return complete_; }
  /// Distance from `p` to the polyline of the current run.
  double cross_track_error(const Eigen::Vector2d& p) const;
  /// Arc length completed over the whole path (finished runs + progress).
  double progress() const;
  std::size_t run_count() const { return runs_.size(); }

 private:
  struct Run {
    std::vector<Eigen::Vector2d> pts;
    std::vector<double> s;  // cumulative length
    Direction dir;
    Pose2d end;
  };

  double project(const Run& run, const Eigen::Vector2d& p, std::size_t& seg) const;
  Eigen::Vector2d point_at(const Run& run, double s) const;

  std::vector<Run> runs_;
  TrackerParams params_;
  TrackerState state_;
  std::size_t seg_ = 0;
  double done_length_ = 0.0;
  bool complete_ = false;
};

/// Chord-construction curvature toward a lookahead point in the vehicle frame,
/// clamped to +-1 / min_turn_radius.
double pure_pursuit_curvature(const Eigen::Vector2d& lookahead_in_vehicle, double min_turn_radius);

struct TrackingConfig {
  double dt = 0.05;
  /// Lateral slip speed [m/s] applied in the world frame along slip_direction.
  double slip = 0.0;
  Eigen::Vector2d slip_direction = Eigen::Vector2d(0.0, -1.0);
  double stall_window = 20.0;    // s of simulated time
  double stall_progress = 0.05;  // m that must be gained per window
  /// Start pose; the path start when unset.
  std::optional<Pose2d> start;
};

struct TrajectorySample {
  double t;
  Pose2d pose;
  double cross_track;
};

struct TrackingResult {
  bool completed = false;
  bool stalled = false;
  std::vector<TrajectorySample> trajectory;
  double mean_cross_track = 0.0;
  double max_cross_track = 0.0;
  double distance_traveled = 0.0;
  double length_forward = 0.0;  // traveled while commanded forward
  double length_reverse = 0.0;
  int cusps = 0;
  Pose2d final_pose;
  double duration = 0.0;
};

/// Pose after moving signed distance `ds` with constant curvature (exact arc).
Pose2d integrate_arc(const Pose2d& pose, double curvature, double ds);

/// Kinematic closed-loop simulation of pure pursuit over `path`.
TrackingResult simulate_tracking(const PathSE2& path, const VehicleModel& model, const TrackerParams& params,
                                 const TrackingConfig& config = {});

}  // namespace harvest
