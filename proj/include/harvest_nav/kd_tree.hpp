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

#include <Eigen/Core>

namespace harvest {

/// Static 3-D k-d tree over a point array (points are not copied; the
/// array must outlive the tree).
class KdTree3 {
 public:
  explicit KdTree3(const std::vector<Eigen::Vector3d>& points);

  /// Squared distances of the k nearest points to `query`, ascending.
  /// `exclude` is an index that is skipped (use npos for none).
  std::vector<double> knn_squared(const Eigen::Vector3d& query, std::size_t k,
                                  std::size_t exclude = npos) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void build(std::size_t lo, std::size_t hi, int depth);
  void search(std::size_t lo, std::size_t hi, int depth, const Eigen::Vector3d& q, std::size_t k,
              std::size_t exclude, std::vector<double>& heap) const;

  const std::vector<Eigen::Vector3d>& points_;
  std::vector<std::size_t> index_;
};

}  // namespace harvest
