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

#include "harvest_nav/grid_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace harvest {

GridMap2D::GridMap2D(int rows, int cols, double resolution, const Eigen::Vector2d& origin)
    : rows_(rows), cols_(cols), resolution_(resolution), origin_(origin) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("grid map needs positive rows/cols");
  if (!(resolution > 0.0)) throw std::invalid_argument("grid map resolution must be > 0");
}

GridMap2D GridMap2D::covering(const Eigen::Vector2d& min, const Eigen::Vector2d& max,
                              double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid map resolution must be > 0");
  const double c0 = std::floor(min.x() / resolution);
  const double r0 = std::floor(min.y() / resolution);
  const int cols = std::max(1, static_cast<int>(std::floor(max.x() / resolution) - c0) + 1);
  const int rows = std::max(1, static_cast<int>(std::floor(max.y() / resolution) - r0) + 1);
  return GridMap2D(rows, cols, resolution,
                   Eigen::Vector2d((c0 + 0.5) * resolution, (r0 + 0.5) * resolution));
}

Eigen::Vector2d GridMap2D::min_corner() const {
  return origin_ - Eigen::Vector2d::Constant(0.5 * resolution_);
}

Eigen::Vector2d GridMap2D::max_corner() const {
  return min_corner() + Eigen::Vector2d(cols_ * resolution_, rows_ * resolution_);
}

bool GridMap2D::has_layer(const std::string& name) const {
  for (const auto& [n, _] : layers_)
    if (n == name) return true;
  return false;
}

const GridMap2D::Layer& GridMap2D::layer(const std::string& name) const {
  for (const auto& [n, l] : layers_)
    if (n == name) return l;
  throw std::out_of_range("no layer '" + name + "'");
}

GridMap2D::Layer& GridMap2D::layer(const std::string& name) {
  for (auto& [n, l] : layers_)
    if (n == name) return l;
  throw std::out_of_range("no layer '" + name + "'");
}

GridMap2D::Layer& GridMap2D::add_layer(const std::string& name, double fill) {
  for (auto& [n, l] : layers_) {
    if (n == name) {
      l.setConstant(rows_, cols_, fill);
      return l;
    }
  }
  layers_.emplace_back(name, Layer::Constant(rows_, cols_, fill));
  return layers_.back().second;
}

std::vector<std::string> GridMap2D::layer_names() const {
  std::vector<std::string> names;
  names.reserve(layers_.size());
  for (const auto& [n, _] : layers_) names.push_back(n);
  return names;
}

CellIndex GridMap2D::world_to_cell_unchecked(const Eigen::Vector2d& p) const {
  const double fc = std::floor((p.x() - origin_.x()) / resolution_ + 0.5);
  const double fr = std::floor((p.y() - origin_.y()) / resolution_ + 0.5);
  // Saturate far-away points instead of overflowing int.
  constexpr double kLimit = 1e9;
  return {static_cast<int>(std::clamp(fr, -kLimit, kLimit)),
          static_cast<int>(std::clamp(fc, -kLimit, kLimit))};
}

std::optional<CellIndex> GridMap2D::world_to_cell(const Eigen::Vector2d& p) const {
  if (!p.allFinite()) return std::nullopt;
  const CellIndex cell = world_to_cell_unchecked(p);
  if (!in_bounds(cell)) return std::nullopt;
  return cell;
}

Eigen::Vector2d GridMap2D::cell_center(const CellIndex& cell) const {
  return origin_ + resolution_ * Eigen::Vector2d(cell.col, cell.row);
}

bool GridMap2D::same_geometry(const GridMap2D& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && resolution_ == other.resolution_ &&
         origin_ == other.origin_;
}

std::optional<CellIndex> world_to_cell(const GridMap2D& map, const Eigen::Vector2d& p) {
  return map.world_to_cell(p);
}

}  // namespace harvest
