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

#include <string>

#include <Eigen/Core>

#include "harvest_nav/footprint.hpp"
#include "harvest_nav/grid_map.hpp"
#include "harvest_nav/path.hpp"

namespace harvest {

/// Exact Euclidean distance transform: for every cell, the distance in meters
/// from its center to the nearest center with mask == true. Infinity when the
/// mask is empty.
GridMap2D::Layer distance_transform(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& mask,
                                    double resolution);

/// Footprint-vs-occupancy test over an immutable map snapshot. A cell is an
/// obstacle when its occupancy is >= 0.5 or nodata. A placement collides when
/// an obstacle cell center lies inside the placed footprint or any footprint
/// vertex leaves the map.
class CollisionChecker {
 public:
  CollisionChecker(const GridMap2D& occupancy, FootprintPolygon footprint,
                   const std::string& layer = layers::kOccupancy);

  bool pose_free(const Pose2d& pose) const;
  /// Every pose of the path is free.
  bool path_free(const PathSE2& path) const;

  /// Distance in meters from a point to the nearest obstacle cell center,
  /// looked up at the point's cell (infinity outside / no obstacles).
  double clearance(const Eigen::Vector2d& p) const;

  const GridMap2D& map() const { return map_; }
  const FootprintPolygon& footprint() const { return footprint_; }
  bool obstacle(int row, int col) const { return mask_(row, col); }

 private:
  GridMap2D map_;  // geometry only
  FootprintPolygon footprint_;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> mask_;
  GridMap2D::Layer distance_;
  double radius_ = 0.0;
};

}  // namespace harvest
