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

#include "harvest_nav/geometry.hpp"
#include "harvest_nav/point_cloud.hpp"

namespace harvest {

struct DetectParams {
  double crop_z_min = 0.7;
  double crop_z_max = 4.0;
  double crop_xy = 8.0;  // half extent of the xy box around each scan origin
  double cluster_tolerance = 0.15;
  int min_points = 1000;
  double min_height = 2.0;
  double max_diameter = 2.5;
  double min_alignment = 0.8;
  double max_density = 0.0;     // points per m^3, 0 disables thinning
  double density_voxel = 0.1;   // voxel edge used for thinning
};

struct TreeDetection {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  /// (a_x, a_y, a_z): the two minor axes then the principal axis, 2 * sqrt(eigenvalue).
  Eigen::Vector3d ellipsoid_semiaxes = Eigen::Vector3d::Zero();
  double alignment = 0.0;
  int point_count = 0;
};

/// Transforms each scan by its pose (z untouched), keeps points inside the
/// crop_xy box around the scan origin, concatenates, crops z, thins.
/// Throws std::invalid_argument if the sequences differ in length.
PointCloud3 crop_and_assemble(const std::vector<PointCloud3>& scans,
                              const std::vector<Pose2d>& poses, const DetectParams& params);

/// Keeps at most floor(max_density * voxel^3) points per voxel, first come first kept.
PointCloud3 thin_to_density(const PointCloud3& cloud, double max_density, double voxel);

/// Connected components of the "closer than tolerance" graph, via a voxel
/// hash with tolerance-sized voxels and union-find. Labels are the smallest
/// point index in each component.
std::vector<int> euclidean_cluster_labels(const PointCloud3& cloud, double tolerance);

/// PCA summary of one point set.
struct ClusterShape {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  Eigen::Vector3d semiaxes = Eigen::Vector3d::Zero();
  double alignment = 0.0;
  double extent_z = 0.0;
};
ClusterShape cluster_shape(const std::vector<Eigen::Vector3d>& points);

/// Clusters, rejects by size / height / diameter / alignment, and reports
/// survivors sorted by planar distance to the cloud origin.
std::vector<TreeDetection> detect_trees(const PointCloud3& cloud, const DetectParams& params);

/// Detection closest (planar) to `expected`; lower index wins ties.
std::optional<TreeDetection> pick_target(const std::vector<TreeDetection>& detections,
                                         const Eigen::Vector2d& expected);

/// Point threshold for synthetic clouds: `fraction` of the points a trunk of
/// radius `radius` shows over the z crop at areal density `density`.
int scaled_min_points(double density, double radius, const DetectParams& params,
                      double fraction = 0.5);

}  // namespace harvest
