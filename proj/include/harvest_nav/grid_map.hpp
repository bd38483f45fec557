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

#include <cmath>
#include <compare>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace harvest {

struct CellIndex {
  int row = 0;
  int col = 0;
  auto operator<=>(const CellIndex&) const = default;
};

/// Layered 2.5D raster. Row index grows with +y, column index with +x.
/// `origin` is the world position of the center of cell (0, 0). A cell owns
/// the half-open square [center - res/2, center + res/2) on both axes.
class GridMap2D {
 public:
  using Layer = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  static constexpr double kNoData = std::numeric_limits<double>::quiet_NaN();
  static bool is_nodata(double v) { return std::isnan(v); }

  GridMap2D() = default;
  GridMap2D(int rows, int cols, double resolution, const Eigen::Vector2d& origin);

  /// Grid whose cells tile [min, max) with centers on (k + 1/2) * resolution.
  static GridMap2D covering(const Eigen::Vector2d& min, const Eigen::Vector2d& max,
                            double resolution);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double resolution() const { return resolution_; }
  const Eigen::Vector2d& origin() const { return origin_; }

  /// Lower-left corner of cell (0, 0) and upper-right corner of the last cell.
  Eigen::Vector2d min_corner() const;
  Eigen::Vector2d max_corner() const;

  bool has_layer(const std::string& name) const;
  const Layer& layer(const std::string& name) const;
  Layer& layer(const std::string& name);
  /// Adds (or resets) a layer filled with `fill`.
  Layer& add_layer(const std::string& name, double fill = kNoData);
  std::vector<std::string> layer_names() const;
  const std::vector<std::pair<std::string, Layer>>& layers() const { return layers_; }

  bool in_bounds(const CellIndex& cell) const {
    return cell.row >= 0 && cell.col >= 0 && cell.row < rows_ && cell.col < cols_;
  }
  std::optional<CellIndex> world_to_cell(const Eigen::Vector2d& p) const;
  /// Unclamped index; may be out of bounds.
  CellIndex world_to_cell_unchecked(const Eigen::Vector2d& p) const;
  Eigen::Vector2d cell_center(const CellIndex& cell) const;

  double at(const std::string& layer_name, const CellIndex& cell) const {
    return layer(layer_name)(cell.row, cell.col);
  }

  bool same_geometry(const GridMap2D& other) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  double resolution_ = 1.0;
  Eigen::Vector2d origin_ = Eigen::Vector2d::Zero();
  std::vector<std::pair<std::string, Layer>> layers_;
};

std::optional<CellIndex> world_to_cell(const GridMap2D& map, const Eigen::Vector2d& p);

namespace layers {
inline constexpr const char* kElevation = "elevation";
inline constexpr const char* kTraversability = "traversability";
inline constexpr const char* kOccupancy = "occupancy";
}  // namespace layers

}  // namespace harvest
