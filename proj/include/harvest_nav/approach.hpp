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

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "harvest_nav/footprint.hpp"
#include "harvest_nav/geometry.hpp"
#include "harvest_nav/grid_map.hpp"

namespace harvest {

/// Extra candidate predicate: return false to drop the pose.
using ApproachHeuristic =
    std::function<bool(const Pose2d& pose, const Eigen::Vector2d& target, const GridMap2D& occupancy)>;

/// Driving footprint: 6 m long, 2.4 m wide, centered on the base frame.
FootprintPolygon default_path_footprint();
/// Approach footprint: 4.8 m wide in the middle for cabin turning, tapering
/// to the path footprint width at both ends.
FootprintPolygon default_approach_footprint();

struct ApproachParams {
  std::vector<double> distances{4.0, 5.0, 6.0};
  int polar_count = 30;
  /// Heading offsets relative to facing the target.
  std::vector<double> heading_offsets{-1.5707963267948966, -0.7853981633974483, 0.0, 0.7853981633974483,
                                      1.5707963267948966};
  FootprintPolygon path_footprint = default_path_footprint();
  FootprintPolygon approach_footprint = default_approach_footprint();
  double slab_halfwidth = 1.0;
  /// Obstacles closer than this to the target belong to the tree itself.
  double target_clearance = 1.0;
  std::vector<ApproachHeuristic> heuristics;

  /// Throws std::invalid_argument when M, N or K is zero or the approach
  /// footprint does not contain the path footprint.
  void validate() const;
};

class InvalidTarget : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// All M*N*K poses in generation order: distance-major, then polar angle,
/// then heading offset.
std::vector<Pose2d> generate_approach_poses(const Eigen::Vector2d& target, const ApproachParams& params);

/// True iff no obstacle cell center lies within slab_halfwidth of the
/// base->target segment, ignoring centers within target_clearance of the target.
bool is_target_reachable(const Pose2d& pose, const Eigen::Vector2d& target, const GridMap2D& occupancy,
                         double slab_halfwidth, double target_clearance = 1.0);

struct ApproachFilterStats {
  int generated = 0;
  int collision_free = 0;
  int reachable = 0;  // counted over all generated poses
  int both = 0;
  int accepted = 0;   // after heuristics
};

/// Generated poses filtered by approach-footprint collision, reachability
/// and heuristics, generation order preserved. Throws InvalidTarget when the
/// target lies outside the map.
std::vector<Pose2d> compute_candidate_approach_poses(const Eigen::Vector2d& target, const GridMap2D& occupancy,
                                                     const ApproachParams& params,
                                                     ApproachFilterStats* stats = nullptr);

namespace heuristics {
/// Keeps poses whose base lies within `radius` of `point`.
ApproachHeuristic within_radius_of(Eigen::Vector2d point, double radius);
/// Keeps poses whose heading deviates at most `tolerance` from `yaw` (mod pi
/// when `either_direction`).
ApproachHeuristic heading_near(double yaw, double tolerance, bool either_direction = true);
}  // namespace heuristics

}  // namespace harvest
