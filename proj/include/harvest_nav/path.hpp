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

#include <cstddef>
#include <vector>

#include "harvest_nav/geometry.hpp"

namespace harvest {

enum class Direction : int { kForward = 1, kReverse = -1 };

inline double sign_of(Direction d) { return d == Direction::kForward ? 1.0 : -1.0; }

/// Discretized SE(2) path. `directions[i]` is the driving direction between
/// poses i and i+1.
class PathSE2 {
 public:
  /// Contiguous run of poses driven in one direction: [first, last].
  struct DirectionRun {
    std::size_t first = 0;
    std::size_t last = 0;
    Direction direction = Direction::kForward;
  };

  PathSE2() = default;
  /// Throws std::invalid_argument if sizes disagree.
  PathSE2(std::vector<Pose2d> poses, std::vector<Direction> directions);

  const std::vector<Pose2d>& poses() const { return poses_; }
  const std::vector<Direction>& directions() const { return directions_; }
  int cusp_count() const { return cusp_count_; }
  std::size_t size() const { return poses_.size(); }
  bool empty() const { return poses_.empty(); }
  const Pose2d& front() const { return poses_.front(); }
  const Pose2d& back() const { return poses_.back(); }

  double length() const;
  double length_in(Direction d) const;
  /// Largest planar distance between consecutive poses.
  double max_step() const;

  std::vector<DirectionRun> direction_runs() const;

  /// Appends `tail`, merging its first pose with this path's last pose.
  void append(const PathSE2& tail);

 private:
  void recount();

  std::vector<Pose2d> poses_;
  std::vector<Direction> directions_;
  int cusp_count_ = 0;
};

/// Default spacing between consecutive path poses [m].
inline constexpr double kDefaultPathStep = 0.1;

}  // namespace harvest
