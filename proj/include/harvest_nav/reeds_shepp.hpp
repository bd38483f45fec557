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

#include <vector>

#include "harvest_nav/geometry.hpp"
#include "harvest_nav/path.hpp"

namespace harvest {

enum class RsSegmentType { kLeft, kStraight, kRight };

/// One Reeds-Shepp segment. `length` is signed (negative = reverse) and
/// expressed in turning radii.
struct RsSegment {
  RsSegmentType type = RsSegmentType::kStraight;
  double length = 0.0;
};

struct ReedsSheppPath {
  std::vector<RsSegment> segments;
  double radius = 1.0;

  /// Total length in meters.
  double length() const;
  /// Number of reverse/forward switches between non-empty segments.
  int cusp_count() const;
};

/// Shortest Reeds-Shepp path from a to b with the given turning radius.
ReedsSheppPath reeds_shepp_shortest(const Pose2d& a, const Pose2d& b, double radius);

/// Length in meters of the shortest path.
double reeds_shepp_distance(const Pose2d& a, const Pose2d& b, double radius);

/// Pose reached from `start` after arc length `s` (meters) along `path`.
Pose2d reeds_shepp_pose_at(const Pose2d& start, const ReedsSheppPath& path, double s);

/// Samples `path` from `start` so that consecutive poses are at most `step`
/// apart; every segment boundary is a sample.
PathSE2 discretize(const Pose2d& start, const ReedsSheppPath& path, double step);

/// Discretized shortest path from a to b.
PathSE2 reeds_shepp_connect(const Pose2d& a, const Pose2d& b, double radius,
                            double step = kDefaultPathStep);

/// Advances a unit-radius pose along one segment (helper shared with tests).
Pose2d advance_unit(const Pose2d& p, RsSegmentType type, double length);

}  // namespace harvest
