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

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "harvest_nav/approach.hpp"
#include "harvest_nav/grid_map.hpp"
#include "harvest_nav/path.hpp"

namespace harvest {

struct RRTParams {
  double turning_radius = 8.3;
  double max_time = 5.0;  // seconds of wall clock
  double goal_bias = 0.1;
  double neighbor_radius_const = 40.0;
  double step_resolution = kDefaultPathStep;
  std::uint64_t rng_seed = 1;
  /// Longest extension toward a sample [m].
  double max_extension = 8.0;
  /// Iteration cap, 0 = none. With a cap and a generous max_time the result
  /// no longer depends on machine speed.
  int max_iterations = 0;
  /// Return as soon as any candidate connects.
  bool stop_at_first_solution = false;

  void validate() const;
};

struct PlanResult {
  Pose2d approach_pose;
  PathSE2 path;
  double t_approach = 0.0;  // candidate generation
  double t_first_solution = 0.0;
  double t_total = 0.0;
  double length_initial = 0.0;
  double length_final = 0.0;
  double length_lower_bound = 0.0;  // straight-line start -> approach pose
  int iterations = 0;
  int tree_size = 0;
  int candidate_count = 0;
};

enum class PlanStatus { kSuccess, kInfeasibleTarget, kNotAttained, kStartInCollision };

/// Error text for a status; failures reuse these strings verbatim.
std::string to_string(PlanStatus status);

struct PlanOutcome {
  PlanStatus status = PlanStatus::kNotAttained;
  PlanResult result;  // metrics are filled in on failure too, path empty
  bool ok() const { return status == PlanStatus::kSuccess; }
  std::string error() const { return ok() ? std::string() : to_string(status); }
};

/// RRT* from `start` toward the candidate approach poses of `target`. Throws
/// InvalidTarget for a target outside the map.
PlanOutcome plan(const Pose2d& start, const Eigen::Vector2d& target, const GridMap2D& occupancy,
                 const ApproachParams& ap, const RRTParams& rp);

/// Same as plan() with budget seconds and an early stop at the first solution.
bool feasibility_probe(const Pose2d& start, const Eigen::Vector2d& target, const GridMap2D& occupancy,
                       const ApproachParams& ap, const RRTParams& rp, double budget = 30.0);

}  // namespace harvest
