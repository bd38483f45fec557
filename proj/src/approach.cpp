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

#include "harvest_nav/approach.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "harvest_nav/collision.hpp"

namespace harvest {

FootprintPolygon default_path_footprint() { return FootprintPolygon::Rectangle(-3.0, 3.0, -1.2, 1.2); }

FootprintPolygon default_approach_footprint() {
  return FootprintPolygon({{3.0, -1.2}, {3.0, 1.2}, {0.0, 2.4}, {-3.0, 1.2}, {-3.0, -1.2}, {0.0, -2.4}});
}

void ApproachParams::validate() const {
  if (distances.empty() || polar_count < 1 || heading_offsets.empty())
    throw std::invalid_argument("approach parameters need M, N, K >= 1");
  if (!approach_footprint.contains(path_footprint))
    throw std::invalid_argument("approach footprint must contain the path footprint");
}

std::vector<Pose2d> generate_approach_poses(const Eigen::Vector2d& target, const ApproachParams& params) {
  std::vector<Pose2d> out;
  out.reserve(params.distances.size() * params.polar_count * params.heading_offsets.size());
  for (double d : params.distances)
    for (int i = 0; i < params.polar_count; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / params.polar_count;
      const Eigen::Vector2d base = target + d * Eigen::Vector2d(std::cos(phi), std::sin(phi));
      const double facing = phi + std::numbers::pi;
      for (double off : params.heading_offsets) out.emplace_back(base, facing + off);
    }
  return out;
}

bool is_target_reachable(const Pose2d& pose, const Eigen::Vector2d& target, const GridMap2D& occupancy,
                         double slab_halfwidth, double target_clearance) {
  const auto& occ = occupancy.layer(layers::kOccupancy);
  const Eigen::Vector2d a = pose.translation();
  const Eigen::Vector2d lo = a.cwiseMin(target).array() - slab_halfwidth;
  const Eigen::Vector2d hi = a.cwiseMax(target).array() + slab_halfwidth;
  const CellIndex c0 = occupancy.world_to_cell_unchecked(lo);
  const CellIndex c1 = occupancy.world_to_cell_unchecked(hi);
  for (int r = std::max(0, c0.row); r <= std::min(occupancy.rows() - 1, c1.row); ++r)
    for (int c = std::max(0, c0.col); c <= std::min(occupancy.cols() - 1, c1.col); ++c) {
      const double v = occ(r, c);
      if (!(std::isnan(v) || v >= 0.5)) continue;
      const Eigen::Vector2d p = occupancy.cell_center({r, c});
      if ((p - target).norm() <= target_clearance) continue;
      if (point_segment_distance(p, a, target) <= slab_halfwidth) return false;
    }
  return true;
}

std::vector<Pose2d> compute_candidate_approach_poses(const Eigen::Vector2d& target, const GridMap2D& occupancy,
                                                     const ApproachParams& params, ApproachFilterStats* stats) {
  params.validate();
  if (!occupancy.world_to_cell(target)) throw InvalidTarget("target outside map");
  const CollisionChecker checker(occupancy, params.approach_footprint);
  ApproachFilterStats s;
  std::vector<Pose2d> out;
  for (const Pose2d& pose : generate_approach_poses(target, params)) {
    ++s.generated;
    const bool free = checker.pose_free(pose);
    const bool reach = is_target_reachable(pose, target, occupancy, params.slab_halfwidth, params.target_clearance);
    s.collision_free += free;
    s.reachable += reach;
    if (!free || !reach) continue;
    ++s.both;
    const bool keep = std::all_of(params.heuristics.begin(), params.heuristics.end(),
                                  [&](const ApproachHeuristic& h) { return h(pose, target, occupancy); });
    if (!keep) continue;
    ++s.accepted;
    out.push_back(pose);
  }
  if (stats) *stats = s;
  return out;
}

namespace heuristics {

ApproachHeuristic within_radius_of(Eigen::Vector2d point, double radius) {
  return [point, radius](const Pose2d& pose, const Eigen::Vector2d&, const GridMap2D&) {
    return (pose.translation() - point).norm() <= radius;
  };
}

ApproachHeuristic heading_near(double yaw, double tolerance, bool either_direction) {
  return [=](const Pose2d& pose, const Eigen::Vector2d&, const GridMap2D&) {
    double d = std::abs(normalize_angle(pose.yaw() - yaw));
    if (either_direction) d = std::min(d, std::numbers::pi - d);
    return d <= tolerance;
  };
}

}  // namespace heuristics
}  // namespace harvest
