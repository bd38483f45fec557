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

#include "harvest_nav/nav_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace harvest {

std::array<Eigen::Vector2d, 4> VehicleModel::wheel_positions() const {
  const double a = 0.5 * wheelbase, b = 0.5 * track;
  return {Eigen::Vector2d(a, b), Eigen::Vector2d(a, -b), Eigen::Vector2d(-a, b), Eigen::Vector2d(-a, -b)};
}

void VehicleModel::validate() const {
  if (!(wheelbase > 0.0) || !(track > 0.0) || !(steering_limit > 0.0) || !(max_speed > 0.0))
    throw std::invalid_argument("vehicle dimensions, steering limit and speed must be positive");
  if (min_turn_radius < wheelbase / std::tan(steering_limit))
    throw std::invalid_argument("min_turn_radius below wheelbase / tan(steering_limit)");
}

WheelAngles icr_wheel_angles(double curvature, const VehicleModel& model) {
  WheelAngles out{};
  const auto wheels = model.wheel_positions();
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector2d& w = wheels[i];
    out[i] = std::atan(curvature * w.x() / (1.0 - curvature * w.y()));
  }
  return out;
}

namespace {

double max_abs(const WheelAngles& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double objective(double c, const WheelAngles& desired, const VehicleModel& model) {
  const WheelAngles a = icr_wheel_angles(c, model);
  double f = 0.0;
  for (int i = 0; i < 4; ++i) f += (a[i] - desired[i]) * (a[i] - desired[i]);
  return f;
}

// Largest |c| along sign(k) with all joints within the limit.
double feasible_bound(double k, const VehicleModel& model) {
  double lo = 0.0, hi = std::abs(k);
  const double s = k < 0 ? -1.0 : 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (max_abs(icr_wheel_angles(s * mid, model)) <= model.steering_limit ? lo : hi) = mid;
  }
  return s * lo;
}

}  // namespace

AckermannSolution ackermann_solve(double curvature, const VehicleModel& model) {
  if (std::abs(curvature) > 1.0 / model.min_turn_radius + 1e-12)
    throw std::invalid_argument("curvature exceeds 1 / min_turn_radius");
  AckermannSolution sol;
  const WheelAngles desired = icr_wheel_angles(curvature, model);
  if (max_abs(desired) <= model.steering_limit) {
    sol.angles = desired;
    sol.curvature = curvature;
    return sol;
  }
  // Feasible curvatures form an interval around 0; minimize over it.
  const double a = feasible_bound(-std::abs(curvature), model);
  const double b = feasible_bound(std::abs(curvature), model);
  constexpr int kScan = 256;
  int best = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double f = objective(a + (b - a) * i / kScan, desired, model);
    if (f < best_f) {
      best_f = f;
      best = i;
    }
  }
  double lo = a + (b - a) * std::max(0, best - 1) / kScan;
  double hi = a + (b - a) * std::min(kScan, best + 1) / kScan;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (objective(x1, desired, model) < objective(x2, desired, model))
      hi = x2;
    else
      lo = x1;
  }
  double c = 0.5 * (lo + hi);
  for (double edge : {a, b})
    if (objective(edge, desired, model) < objective(c, desired, model)) c = edge;
  sol.curvature = c;
  sol.angles = icr_wheel_angles(c, model);
  sol.limited = true;
  return sol;
}

double pure_pursuit_curvature(const Eigen::Vector2d& l, double min_turn_radius) {
  const double d2 = l.squaredNorm();
  if (d2 <= 0.0) return 0.0;
  const double k_max = 1.0 / min_turn_radius;
  return std::clamp(2.0 * l.y() / d2, -k_max, k_max);
}

PurePursuit::PurePursuit(PathSE2 path, TrackerParams params) : params_(params) {
  state_.lookahead = params.lookahead;
  for (const auto& r : path.direction_runs()) {
    Run run;
    run.dir = r.direction;
    run.end = path.poses()[r.last];
    double s = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) {
      const Eigen::Vector2d p = path.poses()[i].translation();
      if (!run.pts.empty()) s += (p - run.pts.back()).norm();
      run.pts.push_back(p);
      run.s.push_back(s);
    }
    runs_.push_back(std::move(run));
  }
  complete_ = runs_.empty();
  if (!runs_.empty()) state_.direction = runs_.front().dir;
  if (!path.empty()) state_.pose = path.front();
}

double PurePursuit::project(const Run& run, const Eigen::Vector2d& p, std::size_t& seg) const {
  if (run.pts.size() < 2) return 0.0;
  const double horizon = run.s[seg] + 2.0 * params_.lookahead + 1.0;
  double best_d = std::numeric_limits<double>::infinity(), best_s = run.s[seg];
  std::size_t best_seg = seg;
  for (std::size_t j = seg; j + 1 < run.pts.size() && run.s[j] <= horizon; ++j) {
    const Eigen::Vector2d a = run.pts[j], ab = run.pts[j + 1] - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double d = (p - (a + t * ab)).norm();
    if (d < best_d) {
      best_d = d;
      best_s = run.s[j] + t * (run.s[j + 1] - run.s[j]);
      best_seg = j;
    }
  }
  seg = best_seg;
  return best_s;
}

Eigen::Vector2d PurePursuit::point_at(const Run& run, double s) const {
  const double len = run.s.back();
  if (s >= len) {
    const Eigen::Vector2d h = run.end.heading() * sign_of(run.dir);
    return run.end.translation() + h * (s - len);
  }
  const auto it = std::upper_bound(run.s.begin(), run.s.end(), s);
  const std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - run.s.begin())) - 1;
  const double span = run.s[j + 1] - run.s[j];
  const double t = span > 0 ? (s - run.s[j]) / span : 0.0;
  return run.pts[j] + t * (run.pts[j + 1] - run.pts[j]);
}

PursuitCommand PurePursuit::update(const Pose2d& pose) {
  state_.pose = pose;
  while (!complete_) {
    const Run& run = runs_[state_.run];
    state_.direction = run.dir;
    const double s = project(run, pose.translation(), seg_);
    state_.path_param = std::max(state_.path_param, s);
    const double len = run.s.back();
    const Eigen::Vector2d to_end = pose.translation() - run.end.translation();
    const bool passed = to_end.dot(run.end.heading() * sign_of(run.dir)) >= 0.0;
    const bool near = to_end.norm() <= params_.goal_tolerance;
    if ((passed || near) && state_.path_param >= len - params_.lookahead) {
      done_length_ += len;
      ++state_.run;
      seg_ = 0;
      state_.path_param = 0.0;
      if (state_.run >= runs_.size()) complete_ = true;
      continue;
    }
    PursuitCommand cmd;
    state_.lookahead = std::clamp(len - state_.path_param, std::min(params_.min_lookahead, params_.lookahead),
                                  params_.lookahead);
    cmd.lookahead_point = point_at(run, state_.path_param + state_.lookahead);
    Eigen::Vector2d local = pose.inverse() * cmd.lookahead_point;
    if (run.dir == Direction::kReverse) {
      // Mirrored frame: the reversed body axis becomes "ahead".
      local = -local;
      cmd.curvature = -pure_pursuit_curvature(local, params_.min_turn_radius);
    } else {
      cmd.curvature = pure_pursuit_curvature(local, params_.min_turn_radius);
    }
    return cmd;
  }
  return {0.0, true, Eigen::Vector2d::Zero()};
}

double PurePursuit::cross_track_error(const Eigen::Vector2d& p) const {
  if (runs_.empty()) return 0.0;
  const Run& run = runs_[std::min(state_.run, runs_.size() - 1)];
  if (run.pts.size() == 1) return (p - run.pts.front()).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < run.pts.size(); ++j)
    best = std::min(best, point_segment_distance(p, run.pts[j], run.pts[j + 1]));
  return best;
}

double PurePursuit::progress() const { return done_length_ + state_.path_param; }

Pose2d integrate_arc(const Pose2d& pose, double k, double ds) {
  const double psi = pose.yaw();
  if (std::abs(k * ds) < 1e-12)
    return {pose.x() + ds * std::cos(psi), pose.y() + ds * std::sin(psi), psi};
  const double th = psi + k * ds;
  return {pose.x() + (std::sin(th) - std::sin(psi)) / k, pose.y() + (std::cos(psi) - std::cos(th)) / k, th};
}

TrackingResult simulate_tracking(const PathSE2& path, const VehicleModel& model, const TrackerParams& params,
                                 const TrackingConfig& config) {
  if (path.empty()) throw std::invalid_argument("cannot track an empty path");
  if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  TrackerParams tp = params;
  tp.speed = std::min(params.speed, model.max_speed);
  PurePursuit pp(path, tp);
  TrackingResult res;
  Pose2d pose = config.start.value_or(path.front());
  const double time_limit = 10.0 * path.length() / tp.speed + 120.0;
  double t = 0.0, err_sum = 0.0;
  double window_start = 0.0, window_progress = 0.0;
  std::optional<Direction> last_dir;
  res.trajectory.push_back({0.0, pose, pp.cross_track_error(pose.translation())});
  while (true) {
    const PursuitCommand cmd = pp.update(pose);
    if (cmd.complete) {
      res.completed = true;
      break;
    }
    const Direction dir = pp.state().direction;
    if (last_dir && *last_dir != dir) ++res.cusps;
    last_dir = dir;
    const double k = ackermann_solve(std::clamp(cmd.curvature, -1.0 / model.min_turn_radius,
                                                1.0 / model.min_turn_radius),
                                     model)
                         .curvature;
    Pose2d next = integrate_arc(pose, k, sign_of(dir) * tp.speed * config.dt);
    if (config.slip != 0.0)
      next = Pose2d(next.translation() + config.slip * config.dt * config.slip_direction.normalized(), next.yaw());
    const double moved = planar_distance(pose, next);
    res.distance_traveled += moved;
    (dir == Direction::kForward ? res.length_forward : res.length_reverse) += moved;
    pose = next;
    t += config.dt;
    const double e = pp.cross_track_error(pose.translation());
    err_sum += e;
    res.max_cross_track = std::max(res.max_cross_track, e);
    res.trajectory.push_back({t, pose, e});
    if (t - window_start >= config.stall_window) {
      if (pp.progress() - window_progress < config.stall_progress) {
        res.stalled = true;
        break;
      }
      window_start = t;
      window_progress = pp.progress();
    }
    if (t > time_limit) {
      res.stalled = true;
      break;
    }
  }
  const std::size_t n = res.trajectory.size() - 1;
  res.mean_cross_track = n > 0 ? err_sum / static_cast<double>(n) : 0.0;
  res.final_pose = pose;
  res.duration = t;
  return res;
}

}  // namespace harvest
