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

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "harvest_nav/approach.hpp"
#include "harvest_nav/collision.hpp"
#include "harvest_nav/forest_sim.hpp"
#include "harvest_nav/geometry.hpp"
#include "harvest_nav/nav_control.hpp"
#include "harvest_nav/planner.hpp"
#include "harvest_nav/tree_detection.hpp"

namespace harvest {

enum class Phase {
  kGetTarget,
  kPlanApproach,
  kDrive,
  kRetractArm,
  kScan,
  kDetectAndGraspPlan,
  kExtendGrab,
  kRetractHold,
  kDone,
  kAborted,
};

/// Acknowledgments and failures reported by subsystems.
enum class EventKind {
  kTargetReady,
  kQueueEmpty,
  kPlanSucceeded,
  kPlanFailed,
  kDriveSucceeded,
  kTrackingFailed,
  kArmRetracted,
  kScanDone,
  kGraspPlanned,
  kGraspUnreachable,
  kGrabDone,
  kHoldRetracted,
  kAbort,
};

inline constexpr int kPhaseCount = 10;
inline constexpr int kEventCount = 13;

std::string to_string(Phase phase);
std::string to_string(EventKind kind);
std::optional<Phase> parse_phase(const std::string& s);
std::optional<EventKind> parse_event(const std::string& s);

/// The transition relation. Empty when `event` is not the pending reply of
/// `from` (terminal phases accept nothing).
std::optional<Phase> next_phase(Phase from, EventKind event);

struct Transition {
  Phase from;
  EventKind event;
  Phase to;
};
/// Every arc of the relation.
std::vector<Transition> transition_relation();

struct MissionEvent {
  EventKind kind = EventKind::kAbort;
  int target = -1;  // kTargetReady only
};

struct LogRecord {
  std::uint64_t seq = 0;
  Phase from = Phase::kGetTarget;
  EventKind event = EventKind::kAbort;
  Phase to = Phase::kGetTarget;
  bool violation = false;  // rejected; `to` equals `from`
  int target = -1;
};

/// Single-owner state machine. Events are validated against the pending
/// request of the current phase; rejected events leave the state unchanged.
class MissionStateMachine {
 public:
  explicit MissionStateMachine(std::vector<int> targets = {});

  /// Applies `event`. Returns false (and logs a protocol violation) if the
  /// event does not answer the current request. kTargetReady must name the
  /// head of the queue.
  bool handle(const MissionEvent& event);

  Phase phase() const { return phase_; }
  std::optional<int> current() const { return current_; }
  const std::deque<int>& queue() const { return queue_; }
  const std::vector<LogRecord>& log() const { return log_; }
  bool terminal() const { return phase_ == Phase::kDone || phase_ == Phase::kAborted; }

 private:
  Phase phase_ = Phase::kGetTarget;
  std::deque<int> queue_;
  std::optional<int> current_;
  std::vector<LogRecord> log_;
  std::uint64_t seq_ = 0;
};

/// Checks a log against the relation and that accepted records chain
/// (each starts where the previous accepted one ended, from kGetTarget).
bool log_consistent(const std::vector<LogRecord>& log);

/// Ordered multi-producer channel feeding a single consumer.
class EventChannel {
 public:
  void push(const MissionEvent& e);
  /// Blocks until an event arrives or the channel is closed and drained.
  std::optional<MissionEvent> pop();
  std::optional<MissionEvent> try_pop();
  void close();

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<MissionEvent> queue_;
  bool closed_ = false;
};

struct GraspParams {
  double reach = 8.0;
  double min_reach = 3.0;
  double grab_height = 1.3;
  double roll = 0.0;
  double pitch = 0.0;
};

struct GraspPose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

struct OutOfReach : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grasp at `tree` (x, y) and grab height above `ground_z`, yaw = bearing from
/// the base position to the tree. Throws OutOfReach beyond params.reach.
GraspPose grasp_pose(const Pose2d& base, const Eigen::Vector2d& tree, const GraspParams& params,
                     double ground_z = 0.0);

/// Gripper state in base-centered cylindrical coordinates: radial distance,
/// world bearing and height.
struct ArmWaypoint {
  double radius = 0.0;
  double yaw = 0.0;
  double z = 0.0;
};

struct ArmParams {
  double min_reach = 3.0;
  double max_linear_speed = 0.5;   // average along a segment, m/s
  double max_angular_speed = 0.3;  // average along a segment, rad/s
};

/// Piecewise cubic Hermite in (radius, yaw, z) through the waypoints with
/// zero velocity at every waypoint.
class ArmTrajectory {
 public:
  ArmTrajectory(std::vector<ArmWaypoint> waypoints, std::vector<double> durations);

  const std::vector<ArmWaypoint>& waypoints() const { return waypoints_; }
  const std::vector<double>& durations() const { return durations_; }
  double duration() const;
  ArmWaypoint at(double t) const;
  /// Derivative of (radius, yaw, z) at t.
  Eigen::Vector3d velocity(double t) const;
  /// Gripper position relative to the base center.
  static Eigen::Vector3d cartesian(const ArmWaypoint& w);

 private:
  std::vector<ArmWaypoint> waypoints_;
  std::vector<double> durations_;
};

/// Cubic Hermite basis evaluation on [0, 1].
double hermite(double p0, double m0, double p1, double m1, double t);

/// Retract to min_reach at the current bearing, turn at min_reach, extend to
/// the goal. Stages of zero length are dropped. Segment durations keep the
/// average linear speed (along the Cartesian curve) and the average yaw rate
/// under the caps.
ArmTrajectory arm_maneuver_waypoints(const ArmWaypoint& current, const ArmWaypoint& goal,
                                     const ArmParams& params);

/// Goal waypoint for a grasp pose seen from `base`.
ArmWaypoint to_arm_waypoint(const Pose2d& base, const GraspPose& grasp);

struct MissionParams {
  ApproachParams approach;
  RRTParams rrt;  // rng_seed is overridden per attempt
  int plan_iterations = 1500;
  double resolution = 0.1;
  VehicleModel vehicle;
  TrackerParams tracker;
  double dt = 0.05;
  DetectParams detect;
  bool detection_enabled = true;
  double scan_half_angle = 0.5235987755982988;  // 30 deg
  double scan_point_density = 400.0;
  double scan_duration = 5.0;  // simulated s
  double detection_gate = 2.0;
  GraspParams grasp;
  ArmParams arm;
  int max_replans = 2;          // per target, tracking or reach failures
  int localization_resamples = 20;
  double pose_update_interval = 1.0;  // simulated s between pose_update events
};

struct TreeOutcome {
  int target = -1;
  std::string outcome;  // grabbed, plan_failed: <error>, unreachable
  std::optional<Pose2d> planned_pose;
  std::optional<Pose2d> executed_pose;
  double path_length = 0.0;
  double tracking_error = 0.0;
  bool detection_used = false;
  double gripper_error = std::numeric_limits<double>::quiet_NaN();
  int replans = 0;
  double cycle_time = 0.0;
};

struct MissionReport {
  std::vector<TreeOutcome> trees;
  std::vector<LogRecord> log;
  Phase final_phase = Phase::kDone;
  int grabbed = 0;
  double total_time = 0.0;
};

/// Mission events for subscribers: type plus a JSON object payload (text).
using MissionEventSink = std::function<void(const std::string& type, const std::string& payload)>;

/// Drives the state machine against the simulated world, one transition per step().
class MissionRunner {
 public:
  MissionRunner(ForestWorld world, std::vector<int> targets, MissionParams params, NoiseModel noise,
                std::uint64_t seed, MissionEventSink sink = {});
  /// Same with a precomputed planning occupancy map (e.g. after edits).
  MissionRunner(ForestWorld world, GridMap2D occupancy, std::vector<int> targets, MissionParams params,
                NoiseModel noise, std::uint64_t seed, MissionEventSink sink = {});

  /// Executes the pending request of the current phase and feeds the reply
  /// to the machine. Returns false once terminal.
  bool step();
  void abort();
  bool done() const { return machine_.terminal(); }
  Phase phase() const { return machine_.phase(); }
  const MissionStateMachine& machine() const { return machine_; }
  MissionReport report() const;
  const Pose2d& true_pose() const { return true_pose_; }
  /// Planning map for the following steps (a committed edit).
  void set_occupancy(GridMap2D occupancy);

 private:
  MissionEvent execute();
  void emit(const std::string& type, const std::string& payload) const;
  Pose2d localize(std::uint64_t salt);
  void finish_tree(const std::string& outcome);

  ForestWorld world_;
  GridMap2D occupancy_;
  CollisionChecker checker_;
  MissionParams params_;
  NoiseModel noise_;
  std::uint64_t seed_;
  MissionEventSink sink_;
  MissionStateMachine machine_;

  Pose2d true_pose_;
  Pose2d believed_pose_;
  ArmWaypoint arm_;
  double time_ = 0.0;
  double cycle_start_ = 0.0;
  double last_pose_event_ = -std::numeric_limits<double>::infinity();
  int attempt_ = 0;
  TreeOutcome tree_;
  PathSE2 path_;
  PointCloud3 scan_;
  std::optional<GraspPose> grasp_;
  std::vector<TreeOutcome> outcomes_;
};

/// Default planning map for a world: rasterized elevation -> traversability -> occupancy.
GridMap2D mission_occupancy(const ForestWorld& world, double resolution);

MissionReport run_mission(const ForestWorld& world, const std::vector<int>& targets, const MissionParams& params,
                          const NoiseModel& noise, std::uint64_t seed);
MissionReport run_mission(const ForestWorld& world, const GridMap2D& occupancy, const std::vector<int>& targets,
                          const MissionParams& params, const NoiseModel& noise, std::uint64_t seed);

/// One JSON object per line: a record per tree, then a summary line.
void write_report_jsonl(std::ostream& out, const MissionReport& report);

}  // namespace harvest
