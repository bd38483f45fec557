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

#include "harvest_nav/terrain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <Eigen/Dense>

#include "harvest_nav/footprint.hpp"
#include "harvest_nav/kd_tree.hpp"

namespace harvest {

PointCloud3 remove_outliers(const PointCloud3& cloud, int k, double stddev_mult) {
  if (k <= 0 || cloud.size() <= static_cast<std::size_t>(k)) return cloud;
  const KdTree3 tree(cloud.points);
  std::vector<double> mean_dist(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto d2 = tree.knn_squared(cloud.points[i], static_cast<std::size_t>(k), i);
    double s = 0.0;
    for (double v : d2) s += std::sqrt(v);
    mean_dist[i] = s / static_cast<double>(d2.size());
  }
  const double n = static_cast<double>(mean_dist.size());
  const double mu = std::accumulate(mean_dist.begin(), mean_dist.end(), 0.0) / n;
  double var = 0.0;
  for (double d : mean_dist) var += (d - mu) * (d - mu);
  const double sigma = std::sqrt(var / std::max(1.0, n - 1.0));
  const double cutoff = mu + stddev_mult * sigma;
  PointCloud3 out;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (mean_dist[i] <= cutoff) out.push_back(cloud.points[i]);
  return out;
}

PointCloud3 voxel_downsample(const PointCloud3& cloud, double voxel) {
  if (!(voxel > 0.0) || cloud.empty()) return cloud;
  using Key = std::array<std::int64_t, 3>;
  std::vector<std::pair<Key, Eigen::Vector3d>> keyed;
  keyed.reserve(cloud.size());
  for (const auto& p : cloud.points)
    keyed.push_back({Key{static_cast<std::int64_t>(std::floor(p.x() / voxel)),
                         static_cast<std::int64_t>(std::floor(p.y() / voxel)),
                         static_cast<std::int64_t>(std::floor(p.z() / voxel))},
                     p});
  // Full lexicographic order so the centroid sums do not depend on input order.
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return std::lexicographical_compare(a.second.data(), a.second.data() + 3, b.second.data(),
                                        b.second.data() + 3);
  });
  PointCloud3 out;
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    while (j < keyed.size() && keyed[j].first == keyed[i].first) sum += keyed[j++].second;
    out.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  return out;
}

PointCloud3 prefilter_cloud(const PointCloud3& cloud, const ElevationParams& params) {
  return voxel_downsample(remove_outliers(cloud, params.outlier_knn, params.outlier_stddev),
                          params.downsample_voxel);
}

double lowest_cluster_elevation(std::vector<double> z, double tolerance, int min_points) {
  std::sort(z.begin(), z.end());
  std::size_t i = 0;
  while (i < z.size()) {
    std::size_t j = i + 1;
    while (j < z.size() && z[j] - z[j - 1] <= tolerance) ++j;
    if (static_cast<int>(j - i) >= min_points) {
      double sum = 0.0;
      for (std::size_t k = i; k < j; ++k) sum += z[k];
      return sum / static_cast<double>(j - i);
    }
    i = j;
  }
  return GridMap2D::kNoData;
}

GridMap2D cloud_to_elevation(const PointCloud3& cloud, const ElevationParams& params,
                             const GridMap2D& geometry) {
  GridMap2D map(geometry.rows(), geometry.cols(), geometry.resolution(), geometry.origin());
  auto& elev = map.add_layer(layers::kElevation);
  const PointCloud3 filtered = prefilter_cloud(cloud, params);
  std::vector<std::vector<double>> buckets(static_cast<std::size_t>(map.rows()) * map.cols());
  for (const auto& p : filtered.points)
    if (auto c = map.world_to_cell(p.head<2>()))
      buckets[static_cast<std::size_t>(c->row) * map.cols() + c->col].push_back(p.z());
  for (int r = 0; r < map.rows(); ++r)
    for (int c = 0; c < map.cols(); ++c) {
      auto& zs = buckets[static_cast<std::size_t>(r) * map.cols() + c];
      if (!zs.empty())
        elev(r, c) = lowest_cluster_elevation(std::move(zs), params.cluster_tolerance,
                                              params.min_cluster_points);
    }
  return map;
}

GridMap2D cloud_to_elevation(const PointCloud3& cloud, const ElevationParams& params) {
  if (!(params.resolution > 0.0)) throw std::invalid_argument("resolution must be > 0");
  if (cloud.empty()) {
    GridMap2D map(1, 1, params.resolution, Eigen::Vector2d::Constant(0.5 * params.resolution));
    map.add_layer(layers::kElevation);
    return map;
  }
  Eigen::Vector2d lo = cloud.points.front().head<2>(), hi = lo;
  for (const auto& p : cloud.points) {
    lo = lo.cwiseMin(p.head<2>());
    hi = hi.cwiseMax(p.head<2>());
  }
  return cloud_to_elevation(cloud, params, GridMap2D::covering(lo, hi, params.resolution));
}

namespace {

std::vector<CellIndex> patch_offsets(double radius, double resolution) {
  std::vector<CellIndex> offsets;
  const int n = static_cast<int>(std::floor(radius / resolution + 1e-9));
  const double r2 = radius * radius * (1.0 + 1e-9);
  for (int dr = -n; dr <= n; ++dr)
    for (int dc = -n; dc <= n; ++dc)
      if ((dr * dr + dc * dc) * resolution * resolution <= r2) offsets.push_back({dr, dc});
  return offsets;
}

std::optional<TerrainCriteria> criteria_with(const GridMap2D::Layer& elev, const GridMap2D& map,
                                             const CellIndex& cell,
                                             const std::vector<CellIndex>& offsets) {
  const double zc = elev(cell.row, cell.col);
  if (GridMap2D::is_nodata(zc)) return std::nullopt;
  TerrainCriteria out;
  // Plane z = a x + b y + c fitted in coordinates local to the cell.
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atz = Eigen::Vector3d::Zero();
  int n = 0;
  const double res = map.resolution();
  for (const auto& o : offsets) {
    const CellIndex nb{cell.row + o.row, cell.col + o.col};
    if (!map.in_bounds(nb)) continue;
    const double z = elev(nb.row, nb.col);
    if (GridMap2D::is_nodata(z)) continue;
    out.step = std::max(out.step, std::abs(z - zc));
    const Eigen::Vector3d a(o.col * res, o.row * res, 1.0);
    ata += a * a.transpose();
    atz += a * (z - zc);
    ++n;
  }
  if (n >= 3) {
    Eigen::LDLT<Eigen::Matrix3d> ldlt(ata);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() &&
        std::abs(ata.determinant()) > 1e-12 * std::pow(res, 4)) {
      const Eigen::Vector3d coef = ldlt.solve(atz);
      out.slope = std::atan(coef.head<2>().norm());
      double sse = 0.0;
      for (const auto& o : offsets) {
        const CellIndex nb{cell.row + o.row, cell.col + o.col};
        if (!map.in_bounds(nb)) continue;
        const double z = elev(nb.row, nb.col);
        if (GridMap2D::is_nodata(z)) continue;
        const double fit = coef.x() * o.col * res + coef.y() * o.row * res + coef.z();
        sse += (z - zc - fit) * (z - zc - fit);
      }
      out.roughness = std::sqrt(sse / n);
    }
  }
  return out;
}

}  // namespace

std::optional<TerrainCriteria> terrain_criteria(const GridMap2D& elev, const CellIndex& cell,
                                                double patch_radius) {
  return criteria_with(elev.layer(layers::kElevation), elev, cell,
                       patch_offsets(patch_radius, elev.resolution()));
}

GridMap2D traversability(const GridMap2D& elev_map, const TraversabilityParams& p) {
  GridMap2D out = elev_map;
  const auto& elev = elev_map.layer(layers::kElevation);
  auto& trav = out.add_layer(layers::kTraversability, 0.0);
  const auto offsets = patch_offsets(p.patch_radius, elev_map.resolution());
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) {
      const auto crit = criteria_with(elev, elev_map, {r, c}, offsets);
      if (!crit) continue;
      trav(r, c) = p.w_step * criterion_score(crit->step, p.critical_step) +
                   p.w_slope * criterion_score(crit->slope, p.critical_slope) +
                   p.w_rough * criterion_score(crit->roughness, p.critical_rough);
    }
  return out;
}

GridMap2D to_occupancy(const GridMap2D& trav_map, double threshold) {
  GridMap2D out = trav_map;
  const auto& trav = trav_map.layer(layers::kTraversability);
  auto& occ = out.add_layer(layers::kOccupancy, 0.0);
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c)
      occ(r, c) = trav(r, c) < threshold ? 1.0 : 0.0;
  return out;
}

CorrectionResult apply_correction(const GridMap2D& map, const std::vector<Eigen::Vector2d>& region,
                                  double value, double threshold) {
  CorrectionResult result{map, false, 0};
  if (region.empty()) return result;
  const auto cells = rasterize_polygon(region, map);
  if (cells.empty()) {
    result.warning = true;
    return result;
  }
  auto& trav = result.map.layer(layers::kTraversability);
  for (const auto& c : cells) {
    if (trav(c.row, c.col) != value) ++result.cells_changed;
    trav(c.row, c.col) = value;
  }
  result.map = to_occupancy(result.map, threshold);
  return result;
}

}  // namespace harvest
