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

#include <Eigen/Core>

#include "harvest_nav/geometry.hpp"
#include "harvest_nav/grid_map.hpp"

namespace harvest {

/// Convex polygon in the vehicle body frame, counter-clockwise vertex order.
/// Fewer than three vertices is accepted as a degenerate footprint.
class FootprintPolygon {
 public:
  FootprintPolygon() = default;
  /// Throws std::invalid_argument if the polygon is not convex and CCW.
  explicit FootprintPolygon(std::vector<Eigen::Vector2d> vertices);

  static FootprintPolygon Rectangle(double x_min, double x_max, double y_min, double y_max);

  const std::vector<Eigen::Vector2d>& vertices() const { return vertices_; }
  bool degenerate() const { return vertices_.size() < 3; }

  /// Radius of the smallest origin-centered disk containing the polygon.
  double circumradius() const;
  double width() const;

  /// True if every vertex of `inner` lies inside this polygon (closed test).
  bool contains(const FootprintPolygon& inner) const;

  std::vector<Eigen::Vector2d> transformed(const Pose2d& pose) const;

 private:
  std::vector<Eigen::Vector2d> vertices_;
};

/// Convexity + CCW orientation check by consecutive cross products.
bool is_convex_ccw(const std::vector<Eigen::Vector2d>& vertices);

/// Inside test for a convex CCW polygon with a top-left fill rule: a point on
/// an edge belongs to the polygon only if that edge faces -x (or -y when
/// horizontal). Axis-aligned boxes therefore own [lo, hi) on both axes.
bool convex_polygon_owns(const std::vector<Eigen::Vector2d>& polygon, const Eigen::Vector2d& p);

/// Every cell whose center lies inside the footprint placed at `pose`.
/// Output is sorted by (row, col).
std::vector<CellIndex> rasterize_footprint(const FootprintPolygon& footprint, const Pose2d& pose,
                                           const GridMap2D& map);

/// Cells whose centers lie inside a simple (possibly concave) world polygon,
/// crossing-number test with half-open edges. Sorted by (row, col).
std::vector<CellIndex> rasterize_polygon(const std::vector<Eigen::Vector2d>& polygon,
                                         const GridMap2D& map);

}  // namespace harvest
