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

#include "harvest_nav/mission.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "harvest_nav/seeding.hpp"
#include "harvest_nav/terrain.hpp"

namespace harvest {
namespace {

using nlohmann::json;

constexpr std::array<const char*, kPhaseCount> kPhaseNames = {
    "GetTarget", "PlanApproach", "Drive", "RetractArm", "Scan", "DetectAndGraspPlan",
    "ExtendGrab", "RetractHold", "Done", "Aborted"};
constexpr std::array<const char*, kEventCount> kEventNames = {
    "target_ready", "queue_empty", "plan_succeeded", "plan_failed", "drive_succeeded",
    "tracking_failed", "arm_retracted", "scan_done", "grasp_planned", "grasp_unreachable",
    "grab_done", "hold_retracted", "abort"};

json pose_json(const Pose2d& p) { return json::array({p.x(), p.y(), p.yaw()}); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string to_string(Phase phase) { return kPhaseNames[static_cast<int>(phase)]; }
std::string to_string(EventKind kind) { return kEventNames[static_cast<int>(kind)]; }

std::optional<Phase> parse_phase(const std::string& s) {
  for (int i = 0; i < kPhaseCount; ++i)
    if (s == kPhaseNames[i]) return static_cast<Phase>(i);
  return std::nullopt;
}

std::optional<EventKind> parse_event(const std::string& s) {
  for (int i = 0; i < kEventCount; ++i)
    if (s == kEventNames[i]) return static_cast<EventKind>(i);
  return std::nullopt;
}

std::optional<Phase> next_phase(Phase from, EventKind event) {
  if (from == Phase::kDone || from == Phase::kAborted) return std::nullopt;
  if (event == EventKind::kAbort) return Phase::kAborted;
  switch (from) {
    case Phase::kGetTarget:
      if (event == EventKind::kTargetReady) return Phase::kPlanApproach;
      if (event == EventKind::kQueueEmpty) return Phase::kDone;
      break;
    case Phase::kPlanApproach:
      if (event == EventKind::kPlanSucceeded) return Phase::kDrive;
      if (event == EventKind::kPlanFailed) return Phase::kGetTarget;
      break;
    case Phase::kDrive:
      if (event == EventKind::kDriveSucceeded) return Phase::kRetractArm;
      if (event == EventKind::kTrackingFailed) return Phase::kPlanApproach;
      break;
    case Phase::kRetractArm:
      if (event == EventKind::kArmRetracted) return Phase::kScan;
      break;
    case Phase::kScan:
      if (event == EventKind::kScanDone) return Phase::kDetectAndGraspPlan;
      break;
    case Phase::kDetectAndGraspPlan:
      if (event == EventKind::kGraspPlanned) return Phase::kExtendGrab;
      if (event == EventKind::kGraspUnreachable) return Phase::kPlanApproach;
      break;
    case Phase::kExtendGrab:
      if (event == EventKind::kGrabDone) return Phase::kRetractHold;
      break;
    case Phase::kRetractHold:
      if (event == EventKind::kHoldRetracted) return Phase::kGetTarget;
      break;
    default:
      break;
  }
  return std::nullopt;
}

std::vector<Transition> transition_relation() {
  std::vector<Transition> out;
  for (int p = 0; p < kPhaseCount; ++p)
    for (int e = 0; e < kEventCount; ++e)
      if (const auto to = next_phase(static_cast<Phase>(p), static_cast<EventKind>(e)))
        out.push_back({static_cast<Phase>(p), static_cast<EventKind>(e), *to});
  return out;
}

MissionStateMachine::MissionStateMachine(std::vector<int> targets) : queue_(targets.begin(), targets.end()) {}

bool MissionStateMachine::handle(const MissionEvent& event) {
  LogRecord rec;
  rec.seq = seq_++;
  rec.from = phase_;
  rec.event = event.kind;
  rec.target = current_.value_or(event.target);
  std::optional<Phase> to = next_phase(phase_, event.kind);
  if (to && event.kind == EventKind::kTargetReady && (queue_.empty() || queue_.front() != event.target))
    to.reset();
  if (to && event.kind == EventKind::kQueueEmpty && !queue_.empty()) to.reset();
  if (!to) {
    rec.to = phase_;
    rec.violation = true;
    log_.push_back(rec);
    return false;
  }
  if (event.kind == EventKind::kTargetReady) {
    current_ = queue_.front();
    queue_.pop_front();
    rec.target = *current_;
  }
  phase_ = *to;
  if (phase_ == Phase::kGetTarget || terminal()) current_.reset();
  rec.to = phase_;
  log_.push_back(rec);
  return true;
}

bool log_consistent(const std::vector<LogRecord>& log) {
  Phase at = Phase::kGetTarget;
  for (const LogRecord& r : log) {
    if (r.from != at) return false;
    if (r.violation) {
      if (r.to != r.from) return false;
      continue;
    }
    const auto to = next_phase(r.from, r.event);
    if (!to || *to != r.to) return false;
    at = r.to;
  }
  return true;
}

void EventChannel::push(const MissionEvent& e) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    queue_.push_back(e);
  }
  cv_.notify_one();
}

std::optional<MissionEvent> EventChannel::pop() {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [&] { return closed_ || !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  const MissionEvent e = queue_.front();
  queue_.pop_front();
  return e;
}

std::optional<MissionEvent> EventChannel::try_pop() {
  std::lock_guard lock(mutex_);
  if (queue_.empty()) return std::nullopt;
  const MissionEvent e = queue_.front();
  queue_.pop_front();
  return e;
}

void EventChannel::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

GraspPose grasp_pose(const Pose2d& base, const Eigen::Vector2d& tree, const GraspParams& params,
                     double ground_z) {
  const Eigen::Vector2d d = tree - base.translation();
  if (d.norm() > params.reach)
    throw OutOfReach("tree out of reach: " + std::to_string(d.norm()) + " m > " + std::to_string(params.reach));
  GraspPose g;
  g.position = Eigen::Vector3d(tree.x(), tree.y(), ground_z + params.grab_height);
  g.roll = params.roll;
  g.pitch = params.pitch;
  g.yaw = std::atan2(d.y(), d.x());
  return g;
}

double hermite(double p0, double m0, double p1, double m1, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
}

ArmTrajectory::ArmTrajectory(std::vector<ArmWaypoint> waypoints, std::vector<double> durations)
    : waypoints_(std::move(waypoints)), durations_(std::move(durations)) {
  if (waypoints_.empty() || durations_.size() + 1 != waypoints_.size())
    throw std::invalid_argument("arm trajectory needs n waypoints and n-1 durations");
  for (double d : durations_)
    if (!(d > 0.0)) throw std::invalid_argument("segment durations must be positive");
}

double ArmTrajectory::duration() const { return std::accumulate(durations_.begin(), durations_.end(), 0.0); }

namespace {

Eigen::Vector3d as_vec(const ArmWaypoint& w) { return {w.radius, w.yaw, w.z}; }

}  // namespace

ArmWaypoint ArmTrajectory::at(double t) const {
  if (durations_.empty() || t <= 0.0) return waypoints_.front();
  for (std::size_t i = 0; i < durations_.size(); ++i) {
    if (t <= durations_[i] || i + 1 == durations_.size()) {
      const double u = std::clamp(t / durations_[i], 0.0, 1.0);
      const Eigen::Vector3d a = as_vec(waypoints_[i]), b = as_vec(waypoints_[i + 1]);
      return {hermite(a[0], 0, b[0], 0, u), hermite(a[1], 0, b[1], 0, u), hermite(a[2], 0, b[2], 0, u)};
    }
    t -= durations_[i];
  }
  return waypoints_.back();
}

Eigen::Vector3d ArmTrajectory::velocity(double t) const {
  if (durations_.empty() || t <= 0.0 || t >= duration()) return Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < durations_.size(); ++i) {
    if (t <= durations_[i]) {
      const double u = t / durations_[i];
      const double ds = (6 * u - 6 * u * u) / durations_[i];
      return (as_vec(waypoints_[i + 1]) - as_vec(waypoints_[i])) * ds;
    }
    t -= durations_[i];
  }
  return Eigen::Vector3d::Zero();
}

Eigen::Vector3d ArmTrajectory::cartesian(const ArmWaypoint& w) {
  return {w.radius * std::cos(w.yaw), w.radius * std::sin(w.yaw), w.z};
}

ArmTrajectory arm_maneuver_waypoints(const ArmWaypoint& current, const ArmWaypoint& goal, const ArmParams& params) {
  if (!(params.max_linear_speed > 0) || !(params.max_angular_speed > 0))
    throw std::invalid_argument("arm speed caps must be positive");
  const double goal_yaw = current.yaw + normalize_angle(goal.yaw - current.yaw);
  const std::vector<ArmWaypoint> all = {current,
                                        {params.min_reach, current.yaw, current.z},
                                        {params.min_reach, goal_yaw, current.z},
                                        {goal.radius, goal_yaw, goal.z}};
  std::vector<ArmWaypoint> wps{all.front()};
  for (std::size_t i = 1; i < all.size(); ++i)
    if ((as_vec(all[i]) - as_vec(wps.back())).norm() > 1e-12) wps.push_back(all[i]);
  std::vector<double> durations;
  for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
    constexpr int kSamples = 64;
    double length = 0.0;
    Eigen::Vector3d prev = ArmTrajectory::cartesian(wps[i]);
    for (int k = 1; k <= kSamples; ++k) {
      const double u = static_cast<double>(k) / kSamples;
      const ArmWaypoint w{hermite(wps[i].radius, 0, wps[i + 1].radius, 0, u),
                          hermite(wps[i].yaw, 0, wps[i + 1].yaw, 0, u), hermite(wps[i].z, 0, wps[i + 1].z, 0, u)};
      const Eigen::Vector3d q = ArmTrajectory::cartesian(w);
      length += (q - prev).norm();
      prev = q;
    }
    const double turn = std::abs(wps[i + 1].yaw - wps[i].yaw);
    durations.push_back(std::max({length / params.max_linear_speed, turn / params.max_angular_speed, 1e-6}));
  }
  return ArmTrajectory(std::move(wps), std::move(durations));
}

ArmWaypoint to_arm_waypoint(const Pose2d& base, const GraspPose& grasp) {
  const Eigen::Vector2d d = grasp.position.head<2>() - base.translation();
  return {d.norm(), grasp.yaw, grasp.position.z()};
}

GridMap2D mission_occupancy(const ForestWorld& world, double resolution) {
  return to_occupancy(traversability(rasterize_world(world, resolution)));
}

MissionRunner::MissionRunner(ForestWorld world, std::vector<int> targets, MissionParams params, NoiseModel noise,
                             std::uint64_t seed, MissionEventSink sink)
    : MissionRunner(world, mission_occupancy(world, params.resolution), std::move(targets), params, noise, seed,
                    std::move(sink)) {}

MissionRunner::MissionRunner(ForestWorld world, GridMap2D occupancy, std::vector<int> targets,
                             MissionParams params, NoiseModel noise, std::uint64_t seed, MissionEventSink sink)
    : world_(std::move(world)),
      occupancy_(std::move(occupancy)),
      checker_(occupancy_, params.approach.path_footprint),
      params_(std::move(params)),
      noise_(noise),
      seed_(seed),
      sink_(std::move(sink)),
      machine_(std::move(targets)) {
  for (int t : machine_.queue())
    if (t < 0 || t >= static_cast<int>(world_.trees.size()))
      throw std::invalid_argument("target id out of range: " + std::to_string(t));
  true_pose_ = default_start_pose(world_);
  believed_pose_ = true_pose_;
  arm_ = {params_.arm.min_reach, true_pose_.yaw(),
          world_.ground.elevation(true_pose_.translation()) + params_.grasp.grab_height};
}

void MissionRunner::emit(const std::string& type, const std::string& payload) const {
  if (sink_) sink_(type, payload);
}

Pose2d MissionRunner::localize(std::uint64_t salt) {
  // Estimates overlapping obstacles are rejected, like a scan matcher would.
  for (int k = 0; k < std::max(1, params_.localization_resamples); ++k) {
    const Pose2d p = corrupt_pose(true_pose_, noise_, seed_of(seed_, 0x10c, salt, k));
    if (checker_.pose_free(p)) return p;
  }
  return true_pose_;
}

void MissionRunner::finish_tree(const std::string& outcome) {
  tree_.outcome = outcome;
  tree_.cycle_time = time_ - cycle_start_;
  outcomes_.push_back(tree_);
  json j = {{"target", tree_.target}};
  if (outcome == "grabbed") {
    j["gripper_error"] = number_or_null(tree_.gripper_error);
    j["detection_used"] = tree_.detection_used;
    emit("tree_grabbed", j.dump());
  } else {
    j["reason"] = outcome;
    emit("tree_failed", j.dump());
  }
}

MissionEvent MissionRunner::execute() {
  const int target = machine_.current().value_or(-1);
  switch (machine_.phase()) {
    case Phase::kGetTarget: {
      if (machine_.queue().empty()) return {EventKind::kQueueEmpty};
      tree_ = TreeOutcome{};
      tree_.target = machine_.queue().front();
      cycle_start_ = time_;
      attempt_ = 0;
      return {EventKind::kTargetReady, tree_.target};
    }
    case Phase::kPlanApproach: {
      ++attempt_;
      tree_.replans = attempt_ - 1;
      if (attempt_ > params_.max_replans + 1) {
        finish_tree("plan_failed: replan limit reached");
        return {EventKind::kPlanFailed};
      }
      believed_pose_ = localize(seed_of(target, attempt_));
      RRTParams rp = params_.rrt;
      rp.rng_seed = seed_of(seed_, 0x91a, target, attempt_);
      rp.max_iterations = params_.plan_iterations;
      rp.max_time = std::max(rp.max_time, 600.0);
      PlanOutcome o;
      try {
        o = plan(believed_pose_, world_.trees[target].position, occupancy_, params_.approach, rp);
      } catch (const InvalidTarget& e) {
        finish_tree(std::string("plan_failed: ") + e.what());
        return {EventKind::kPlanFailed};
      }
      if (!o.ok()) {
        finish_tree("plan_failed: " + o.error());
        return {EventKind::kPlanFailed};
      }
      path_ = o.result.path;
      tree_.planned_pose = o.result.approach_pose;
      tree_.path_length = path_.length();
      json poses = json::array();
      for (const Pose2d& p : path_.poses()) poses.push_back(pose_json(p));
      emit("path_update", json{{"target", target}, {"length", path_.length()}, {"poses", poses}}.dump());
      return {EventKind::kPlanSucceeded};
    }
    case Phase::kDrive: {
      TrackingConfig tc;
      tc.dt = params_.dt;
      tc.start = believed_pose_;
      const TrackingResult r = simulate_tracking(path_, params_.vehicle, params_.tracker, tc);
      // The controller acts on the estimate; the machine moves by the same
      // body-frame motion from its true pose.
      const Pose2d to_true = true_pose_ * believed_pose_.inverse();
      for (const TrajectorySample& s : r.trajectory) {
        if (time_ + s.t < last_pose_event_ + params_.pose_update_interval) continue;
        last_pose_event_ = time_ + s.t;
        const Pose2d p = to_true * s.pose;
        emit("pose_update", json{{"t", time_ + s.t}, {"pose", pose_json(p)}}.dump());
      }
      time_ += r.duration;
      true_pose_ = to_true * r.final_pose;
      believed_pose_ = r.final_pose;
      tree_.tracking_error = r.mean_cross_track;
      if (!r.completed) return {EventKind::kTrackingFailed};
      tree_.executed_pose = true_pose_;
      return {EventKind::kDriveSucceeded};
    }
    case Phase::kRetractArm: {
      const ArmWaypoint retracted{params_.arm.min_reach, arm_.yaw, arm_.z};
      if (std::abs(arm_.radius - retracted.radius) > 1e-12) {
        time_ += arm_maneuver_waypoints(arm_, retracted, params_.arm).duration();
        arm_ = retracted;
      }
      return {EventKind::kArmRetracted};
    }
    case Phase::kScan: {
      time_ += params_.scan_duration;
      const Eigen::Vector2d expected = world_.trees[target].position;
      const Eigen::Vector2d expected_body = believed_pose_.inverse() * expected;
      const double bearing = std::atan2(expected_body.y(), expected_body.x());
      const double range = params_.grasp.reach + 1.0;
      // World box around the sector as the machine really sees it.
      Eigen::Vector2d lo = true_pose_.translation(), hi = lo;
      for (int k = 0; k <= 8; ++k) {
        const double a = bearing - params_.scan_half_angle + k * params_.scan_half_angle / 4.0;
        const Eigen::Vector2d q = true_pose_ * Eigen::Vector2d(range * std::cos(a), range * std::sin(a));
        lo = lo.cwiseMin(q);
        hi = hi.cwiseMax(q);
      }
      const PointCloud3 cloud = sample_cloud(world_, Rect{lo, hi}, params_.scan_point_density,
                                             {0.0, 0.0, noise_.point_sigma},
                                             seed_of(seed_, 0x5ca, target, attempt_));
      scan_ = PointCloud3{};
      const Pose2d true_inv = true_pose_.inverse();
      for (const Eigen::Vector3d& q : cloud.points) {
        const Eigen::Vector2d body = true_inv * Eigen::Vector2d(q.head<2>());
        if (body.norm() > range) continue;
        if (std::abs(normalize_angle(std::atan2(body.y(), body.x()) - bearing)) > params_.scan_half_angle) continue;
        const double h = q.z() - world_.ground.elevation(q.x(), q.y());
        if (h < params_.detect.crop_z_min || h > params_.detect.crop_z_max) continue;
        const Eigen::Vector2d m = believed_pose_ * body;
        scan_.push_back({m.x(), m.y(), h});
      }
      return {EventKind::kScanDone};
    }
    case Phase::kDetectAndGraspPlan: {
      const Eigen::Vector2d expected = world_.trees[target].position;
      Eigen::Vector2d aim = expected;
      tree_.detection_used = false;
      if (params_.detection_enabled) {
        DetectParams dp = params_.detect;
        dp.min_points = scaled_min_points(params_.scan_point_density, ScenarioSpec{}.radius_min, dp);
        const auto det = pick_target(detect_trees(scan_, dp), expected);
        json j = {{"target", target}, {"detected", det.has_value()}};
        if (det) {
          j["x"] = det->center.x();
          j["y"] = det->center.y();
        }
        if (det && (det->center.head<2>() - expected).norm() <= params_.detection_gate) {
          aim = det->center.head<2>();
          tree_.detection_used = true;
        }
        j["used"] = tree_.detection_used;
        emit("detection_result", j.dump());
      }
      try {
        grasp_ = grasp_pose(believed_pose_, aim, params_.grasp, world_.ground.elevation(aim));
      } catch (const OutOfReach&) {
        return {EventKind::kGraspUnreachable};
      }
      return {EventKind::kGraspPlanned};
    }
    case Phase::kExtendGrab: {
      const ArmWaypoint goal = to_arm_waypoint(believed_pose_, *grasp_);
      time_ += arm_maneuver_waypoints(arm_, goal, params_.arm).duration();
      arm_ = goal;
      const Pose2d to_true = true_pose_ * believed_pose_.inverse();
      const Eigen::Vector2d gripper = to_true * Eigen::Vector2d(grasp_->position.head<2>());
      tree_.gripper_error = (gripper - world_.trees[target].position).norm();
      return {EventKind::kGrabDone};
    }
    case Phase::kRetractHold: {
      const ArmWaypoint retracted{params_.arm.min_reach, arm_.yaw, arm_.z};
      time_ += arm_maneuver_waypoints(arm_, retracted, params_.arm).duration();
      arm_ = retracted;
      finish_tree("grabbed");
      return {EventKind::kHoldRetracted};
    }
    default:
      return {EventKind::kAbort};
  }
}

bool MissionRunner::step() {
  if (machine_.terminal()) return false;
  const Phase from = machine_.phase();
  const MissionEvent ev = execute();
  machine_.handle(ev);
  const LogRecord& rec = machine_.log().back();
  emit("phase_changed", json{{"from", to_string(from)},
                             {"to", to_string(machine_.phase())},
                             {"event", to_string(ev.kind)},
                             {"target", rec.target},
                             {"t", time_}}
                            .dump());
  if (machine_.terminal()) {
    const MissionReport r = report();
    emit("mission_done", json{{"phase", to_string(r.final_phase)},
                              {"grabbed", r.grabbed},
                              {"trees", r.trees.size()},
                              {"t", time_}}
                             .dump());
  }
  return !machine_.terminal();
}

void MissionRunner::abort() {
  if (machine_.terminal()) return;
  const Phase from = machine_.phase();
  const bool in_tree = machine_.current().has_value();
  machine_.handle({EventKind::kAbort});
  if (in_tree) finish_tree("aborted");
  emit("phase_changed", json{{"from", to_string(from)},
                             {"to", to_string(machine_.phase())},
                             {"event", to_string(EventKind::kAbort)},
                             {"target", machine_.log().back().target},
                             {"t", time_}}
                            .dump());
  const MissionReport r = report();
  emit("mission_done",
       json{{"phase", to_string(r.final_phase)}, {"grabbed", r.grabbed}, {"trees", r.trees.size()}, {"t", time_}}
           .dump());
}

MissionReport MissionRunner::report() const {
  MissionReport r;
  r.trees = outcomes_;
  r.log = machine_.log();
  r.final_phase = machine_.phase();
  r.total_time = time_;
  for (const TreeOutcome& t : outcomes_) r.grabbed += t.outcome == "grabbed";
  return r;
}

void MissionRunner::set_occupancy(GridMap2D occupancy) {
  if (!occupancy.has_layer(layers::kOccupancy)) throw std::invalid_argument("map has no occupancy layer");
  occupancy_ = std::move(occupancy);
  checker_ = CollisionChecker(occupancy_, params_.approach.path_footprint);
}

MissionReport run_mission(const ForestWorld& world, const std::vector<int>& targets, const MissionParams& params,
                          const NoiseModel& noise, std::uint64_t seed) {
  return run_mission(world, mission_occupancy(world, params.resolution), targets, params, noise, seed);
}

MissionReport run_mission(const ForestWorld& world, const GridMap2D& occupancy, const std::vector<int>& targets,
                          const MissionParams& params, const NoiseModel& noise, std::uint64_t seed) {
  MissionRunner runner(world, occupancy, targets, params, noise, seed);
  while (runner.step()) {
  }
  return runner.report();
}

void write_report_jsonl(std::ostream& out, const MissionReport& report) {
  for (const TreeOutcome& t : report.trees) {
    json j = {{"type", "tree"},
              {"target", t.target},
              {"outcome", t.outcome},
              {"planned_pose", t.planned_pose ? pose_json(*t.planned_pose) : json(nullptr)},
              {"executed_pose", t.executed_pose ? pose_json(*t.executed_pose) : json(nullptr)},
              {"path_length", t.path_length},
              {"tracking_error", t.tracking_error},
              {"detection_used", t.detection_used},
              {"gripper_error", number_or_null(t.gripper_error)},
              {"replans", t.replans},
              {"cycle_time", t.cycle_time}};
    out << j.dump() << "\n";
  }
  int violations = 0;
  for (const LogRecord& r : report.log) violations += r.violation;
  out << json{{"type", "summary"},
              {"trees", report.trees.size()},
              {"grabbed", report.grabbed},
              {"final_phase", to_string(report.final_phase)},
              {"total_time", report.total_time},
              {"transitions", report.log.size()},
              {"violations", violations}}
             .dump()
      << "\n";
}

}  // namespace harvest
