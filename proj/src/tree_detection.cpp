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

#include "harvest_nav/tree_detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Eigenvalues>

namespace harvest {
namespace {

using VoxelKey = std::array<std::int64_t, 3>;

struct VoxelKeyHash {
  std::size_t operator()(const VoxelKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

VoxelKey voxel_of(const Eigen::Vector3d& p, double size) {
  return {static_cast<std::int64_t>(std::floor(p.x() / size)),
          static_cast<std::int64_t>(std::floor(p.y() / size)),
          static_cast<std::int64_t>(std::floor(p.z() / size))};
}

int find_root(std::vector<int>& parent, int a) {
  while (parent[a] != a) a = parent[a] = parent[parent[a]];
  return a;
}

}  // namespace

PointCloud3 thin_to_density(const PointCloud3& cloud, double max_density, double voxel) {
  if (!(max_density > 0.0) || !(voxel > 0.0)) return cloud;
  const auto cap = static_cast<std::size_t>(std::floor(max_density * voxel * voxel * voxel));
  std::unordered_map<VoxelKey, std::size_t, VoxelKeyHash> counts;
  PointCloud3 out;
  for (const auto& p : cloud.points) {
    auto& n = counts[voxel_of(p, voxel)];
    if (n < cap) {
      ++n;
      out.push_back(p);
    }
  }
  return out;
}

PointCloud3 crop_and_assemble(const std::vector<PointCloud3>& scans,
                              const std::vector<Pose2d>& poses, const DetectParams& params) {
  if (scans.size() != poses.size())
    throw std::invalid_argument("crop_and_assemble needs one pose per scan");
  PointCloud3 assembled;
  for (std::size_t s = 0; s < scans.size(); ++s) {
    const Eigen::Matrix2d rot = poses[s].rotation();
    for (const auto& p : scans[s].points) {
      if (std::abs(p.x()) > params.crop_xy || std::abs(p.y()) > params.crop_xy) continue;
      if (p.z() < params.crop_z_min || p.z() > params.crop_z_max) continue;
      const Eigen::Vector2d xy = rot * p.head<2>() + poses[s].translation();
      assembled.push_back({xy.x(), xy.y(), p.z()});
    }
  }
  return thin_to_density(assembled, params.max_density, params.density_voxel);
}

std::vector<int> euclidean_cluster_labels(const PointCloud3& cloud, double tolerance) {
  const int n = static_cast<int>(cloud.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  if (n == 0) return parent;
  std::unordered_map<VoxelKey, std::vector<int>, VoxelKeyHash> grid;
  grid.reserve(cloud.size());
  for (int i = 0; i < n; ++i) grid[voxel_of(cloud.points[i], tolerance)].push_back(i);
  const double t2 = tolerance * tolerance;
  for (int i = 0; i < n; ++i) {
    const VoxelKey k = voxel_of(cloud.points[i], tolerance);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({k[0] + dx, k[1] + dy, k[2] + dz});
          if (it == grid.end()) continue;
          for (int j : it->second) {
            if (j <= i || (cloud.points[i] - cloud.points[j]).squaredNorm() > t2) continue;
            int a = find_root(parent, i), b = find_root(parent, j);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
          }
        }
  }
  for (int i = 0; i < n; ++i) parent[i] = find_root(parent, i);
  return parent;
}

ClusterShape cluster_shape(const std::vector<Eigen::Vector3d>& points) {
  ClusterShape shape;
  if (points.empty()) return shape;
  const double n = static_cast<double>(points.size());
  double zmin = points.front().z(), zmax = zmin;
  for (const auto& p : points) {
    shape.centroid += p;
    zmin = std::min(zmin, p.z());
    zmax = std::max(zmax, p.z());
  }
  shape.centroid /= n;
  shape.extent_z = zmax - zmin;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = p - shape.centroid;
    cov.noalias() += d * d.transpose();
  }
  cov /= n;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d lambda = eig.eigenvalues().cwiseMax(0.0);
  // Eigenvalues ascend: (a_x, a_y) = larger / smaller minor axis, a_z = principal.
  shape.semiaxes = {2.0 * std::sqrt(lambda(1)), 2.0 * std::sqrt(lambda(0)), 2.0 * std::sqrt(lambda(2))};
  shape.alignment = std::min(1.0, std::abs(eig.eigenvectors().col(2).z()));
  return shape;
}

std::vector<TreeDetection> detect_trees(const PointCloud3& cloud, const DetectParams& params) {
  std::vector<TreeDetection> out;
  if (cloud.empty()) return out;
  const std::vector<int> labels = euclidean_cluster_labels(cloud, params.cluster_tolerance);
  std::map<int, std::vector<Eigen::Vector3d>> clusters;
  for (std::size_t i = 0; i < labels.size(); ++i) clusters[labels[i]].push_back(cloud.points[i]);
  for (auto& [label, pts] : clusters) {
    if (static_cast<int>(pts.size()) < params.min_points) continue;
    // Canonical order keeps the floating-point sums independent of input order.
    std::sort(pts.begin(), pts.end(), [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
      return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
    });
    const ClusterShape s = cluster_shape(pts);
    if (s.extent_z < params.min_height) continue;
    if (2.0 * std::max(s.semiaxes.x(), s.semiaxes.y()) > params.max_diameter) continue;
    if (s.alignment < params.min_alignment) continue;
    out.push_back({s.centroid, s.semiaxes, s.alignment, static_cast<int>(pts.size())});
  }
  std::sort(out.begin(), out.end(), [](const TreeDetection& a, const TreeDetection& b) {
    const double da = a.center.head<2>().norm(), db = b.center.head<2>().norm();
    if (da != db) return da < db;
    return std::lexicographical_compare(a.center.data(), a.center.data() + 3, b.center.data(),
                                        b.center.data() + 3);
  });
  return out;
}

std::optional<TreeDetection> pick_target(const std::vector<TreeDetection>& detections,
                                         const Eigen::Vector2d& expected) {
  std::optional<TreeDetection> best;
  double best_d = 0.0;
  for (const auto& d : detections) {
    const double dist = (d.center.head<2>() - expected).norm();
    if (!best || dist < best_d) {
      best = d;
      best_d = dist;
    }
  }
  return best;
}

int scaled_min_points(double density, double radius, const DetectParams& params, double fraction) {
  const double visible = params.crop_z_max - params.crop_z_min;
  return std::max(1, static_cast<int>(fraction * density * 2.0 * std::numbers::pi * radius * visible));
}

}  // namespace harvest
