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

#include "harvest_nav/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace harvest {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared distance transform of a sampled function (lower envelope of
// parabolas).
void dt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
           std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    while (k >= 0) {
      const double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
      if (s <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -kInf : ((f[q] + q * q) - (f[v[k - 1]] + v[k - 1] * v[k - 1])) / (2.0 * (q - v[k - 1]));
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    d[q] = (q - v[j]) * (q - v[j]) + f[v[j]];
  }
}

}  // namespace

GridMap2D::Layer distance_transform(
    const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& mask, double resolution) {
  const int rows = static_cast<int>(mask.rows()), cols = static_cast<int>(mask.cols());
  GridMap2D::Layer sq(rows, cols);
  const int n = std::max(rows, cols);
  std::vector<double> f, d;
  std::vector<int> v(n + 1);
  std::vector<double> z(n + 2);
  f.resize(rows);
  d.resize(rows);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) f[r] = mask(r, c) ? 0.0 : kInf;
    dt_1d(f, d, v, z);
    for (int r = 0; r < rows; ++r) sq(r, c) = d[r];
  }
  f.resize(cols);
  d.resize(cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) f[c] = sq(r, c);
    dt_1d(f, d, v, z);
    for (int c = 0; c < cols; ++c) sq(r, c) = d[c];
  }
  return sq.cwiseSqrt() * resolution;
}

CollisionChecker::CollisionChecker(const GridMap2D& occupancy, FootprintPolygon footprint,
                                   const std::string& layer)
    : map_(occupancy.rows(), occupancy.cols(), occupancy.resolution(), occupancy.origin()),
      footprint_(std::move(footprint)) {
  const auto& occ = occupancy.layer(layer);
  mask_ = occ.array().isNaN() || occ.array() >= 0.5;
  distance_ = distance_transform(mask_, map_.resolution());
  radius_ = footprint_.circumradius();
}

double CollisionChecker::clearance(const Eigen::Vector2d& p) const {
  const auto cell = map_.world_to_cell(p);
  if (!cell) return 0.0;
  return distance_(cell->row, cell->col);
}

bool CollisionChecker::pose_free(const Pose2d& pose) const {
  const auto poly = footprint_.transformed(pose);
  const Eigen::Vector2d lo = map_.min_corner(), hi = map_.max_corner();
  Eigen::Vector2d bmin = poly.front(), bmax = poly.front();
  for (const auto& p : poly) {
    if (p.x() < lo.x() || p.y() < lo.y() || p.x() >= hi.x() || p.y() >= hi.y()) return false;
    bmin = bmin.cwiseMin(p);
    bmax = bmax.cwiseMax(p);
  }
  const auto center = map_.world_to_cell(pose.translation());
  if (!center) return false;
  // Any obstacle center inside the footprint is within radius_ of the pose,
  // and the pose is within half a cell diagonal of its cell center.
  const double half_diag = 0.7072 * map_.resolution();
  if (distance_(center->row, center->col) - half_diag > radius_) return true;

  const CellIndex c0 = map_.world_to_cell_unchecked(bmin);
  const CellIndex c1 = map_.world_to_cell_unchecked(bmax);
  const int r0 = std::max(0, c0.row), r1 = std::min(map_.rows() - 1, c1.row);
  const int k0 = std::max(0, c0.col), k1 = std::min(map_.cols() - 1, c1.col);
  for (int r = r0; r <= r1; ++r)
    for (int c = k0; c <= k1; ++c)
      if (mask_(r, c) && convex_polygon_owns(poly, map_.cell_center({r, c}))) return false;
  return true;
}

bool CollisionChecker::path_free(const PathSE2& path) const {
  for (const auto& p : path.poses())
    if (!pose_free(p)) return false;
  return true;
}

}  // namespace harvest
