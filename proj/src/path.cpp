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

#include "harvest_nav/path.hpp"

#include <algorithm>
#include <stdexcept>

namespace harvest {

PathSE2::PathSE2(std::vector<Pose2d> poses, std::vector<Direction> directions)
    : poses_(std::move(poses)), directions_(std::move(directions)) {
  const std::size_t expected = poses_.empty() ? 0 : poses_.size() - 1;
  if (directions_.size() != expected)
    throw std::invalid_argument("path needs one direction flag per pose pair");
  recount();
}

void PathSE2::recount() {
  cusp_count_ = 0;
  for (std::size_t i = 1; i < directions_.size(); ++i)
    if (directions_[i] != directions_[i - 1]) ++cusp_count_;
}

double PathSE2::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < poses_.size(); ++i) total += planar_distance(poses_[i - 1], poses_[i]);
  return total;
}

double PathSE2::length_in(Direction d) const {
  double total = 0.0;
  for (std::size_t i = 1; i < poses_.size(); ++i)
    if (directions_[i - 1] == d) total += planar_distance(poses_[i - 1], poses_[i]);
  return total;
}

double PathSE2::max_step() const {
  double step = 0.0;
  for (std::size_t i = 1; i < poses_.size(); ++i)
    step = std::max(step, planar_distance(poses_[i - 1], poses_[i]));
  return step;
}

std::vector<PathSE2::DirectionRun> PathSE2::direction_runs() const {
  std::vector<DirectionRun> runs;
  if (poses_.size() < 2) return runs;
  DirectionRun run{0, 1, directions_[0]};
  for (std::size_t i = 1; i < directions_.size(); ++i) {
    if (directions_[i] == run.direction) {
      run.last = i + 1;
    } else {
      runs.push_back(run);
      run = {i, i + 1, directions_[i]};
    }
  }
  runs.push_back(run);
  return runs;
}

void PathSE2::append(const PathSE2& tail) {
  if (tail.empty()) return;
  if (poses_.empty()) {
    *this = tail;
    return;
  }
  poses_.insert(poses_.end(), tail.poses_.begin() + 1, tail.poses_.end());
  directions_.insert(directions_.end(), tail.directions_.begin(), tail.directions_.end());
  recount();
}

}  // namespace harvest
