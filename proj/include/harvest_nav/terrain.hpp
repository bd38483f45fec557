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

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "harvest_nav/grid_map.hpp"
#include "harvest_nav/point_cloud.hpp"

namespace harvest {

struct ElevationParams {
  double resolution = 0.1;
  double cluster_tolerance = 0.3;
  int min_cluster_points = 1;
  double downsample_voxel = 0.0;  // 0 disables voxel downsampling
  int outlier_knn = 0;            // 0 disables outlier removal
  double outlier_stddev = 1.0;
};

struct TraversabilityParams {
  double patch_radius = 0.3;
  double w_step = 0.8;
  double w_slope = 0.2;
  double w_rough = 0.0;
  double critical_step = 0.3;
  double critical_slope = 0.3490658503988659;  // 20 degrees
  double critical_rough = 0.1;
  double obstacle_threshold = 0.5;
};

/// Statistical outlier filter: drops points whose mean distance to their k
/// nearest neighbors exceeds mean + stddev_mult * sigma over the cloud.
PointCloud3 remove_outliers(const PointCloud3& cloud, int k, double stddev_mult);

/// Replaces the points of every occupied voxel by their centroid. Output is
/// ordered by voxel key, so it does not depend on input order.
PointCloud3 voxel_downsample(const PointCloud3& cloud, double voxel);

/// Outlier removal then voxel downsampling, as configured.
PointCloud3 prefilter_cloud(const PointCloud3& cloud, const ElevationParams& params);

/// Ground elevation of one cell from its z values: 1-D single-linkage
/// clusters (gap <= tolerance joins), clusters smaller than min_points are
/// dropped, result is the centroid of the lowest survivor. NaN if none.
double lowest_cluster_elevation(std::vector<double> z, double tolerance, int min_points);

/// Elevation layer on a grid covering the filtered cloud.
GridMap2D cloud_to_elevation(const PointCloud3& cloud, const ElevationParams& params);
/// Same, on the geometry of `geometry` (its layers are ignored).
GridMap2D cloud_to_elevation(const PointCloud3& cloud, const ElevationParams& params,
                             const GridMap2D& geometry);

struct TerrainCriteria {
  double step = 0.0;
  double slope = 0.0;  // radians
  double roughness = 0.0;
};

/// Step, slope and roughness of the patch around `cell`; empty for nodata.
std::optional<TerrainCriteria> terrain_criteria(const GridMap2D& elev, const CellIndex& cell,
                                                double patch_radius);

/// max(0, 1 - value / critical).
inline double criterion_score(double value, double critical) {
  const double s = 1.0 - value / critical;
  return s > 0.0 ? s : 0.0;
}

/// Copy of `elev` with a "traversability" layer in [0, 1].
GridMap2D traversability(const GridMap2D& elev, const TraversabilityParams& params = {});

/// Copy of `trav` with an "occupancy" layer: 1 where traversability < threshold.
GridMap2D to_occupancy(const GridMap2D& trav, double threshold = 0.5);

struct CorrectionResult {
  GridMap2D map;
  bool warning = false;  // region did not touch the map
  int cells_changed = 0;
};

/// Overwrites traversability inside `region` (any simple polygon, world
/// frame) and recomputes occupancy.
CorrectionResult apply_correction(const GridMap2D& map, const std::vector<Eigen::Vector2d>& region,
                                  double value, double threshold = 0.5);

}  // namespace harvest
