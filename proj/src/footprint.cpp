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

#include "harvest_nav/footprint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace harvest {
namespace {

constexpr double kEdgeEps = 1e-9;

struct CellRange {
  int row_min, row_max, col_min, col_max;
  bool empty() const { return row_min > row_max || col_min > col_max; }
};

CellRange cells_overlapping_bbox(const std::vector<Eigen::Vector2d>& pts, const GridMap2D& map) {
  Eigen::Vector2d lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const CellIndex a = map.world_to_cell_unchecked(lo);
  const CellIndex b = map.world_to_cell_unchecked(hi);
  return {std::max(0, a.row - 1), std::min(map.rows() - 1, b.row + 1), std::max(0, a.col - 1),
          std::min(map.cols() - 1, b.col + 1)};
}

}  // namespace

bool is_convex_ccw(const std::vector<Eigen::Vector2d>& v) {
  const std::size_t n = v.size();
  if (n < 3) return false;
  double turning = 0.0;
  bool any_turn = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d e0 = v[(i + 1) % n] - v[i];
    const Eigen::Vector2d e1 = v[(i + 2) % n] - v[(i + 1) % n];
    if (e0.norm() <= kEdgeEps || e1.norm() <= kEdgeEps) return false;
    const double c = cross2(e0, e1);
    if (c < -kEdgeEps * e0.norm() * e1.norm()) return false;
    if (c > kEdgeEps) any_turn = true;
    turning += std::atan2(c, e0.dot(e1));
  }
  // A convex simple polygon turns exactly once around.
  return any_turn && std::abs(turning - 2.0 * std::numbers::pi) < 1e-6;
}

FootprintPolygon::FootprintPolygon(std::vector<Eigen::Vector2d> vertices)
    : vertices_(std::move(vertices)) {
  for (const auto& v : vertices_)
    if (!v.allFinite()) throw std::invalid_argument("footprint vertex not finite");
  if (vertices_.size() >= 3 && !is_convex_ccw(vertices_))
    throw std::invalid_argument("footprint must be convex with counter-clockwise vertices");
}

FootprintPolygon FootprintPolygon::Rectangle(double x_min, double x_max, double y_min,
                                             double y_max) {
  return FootprintPolygon({{x_min, y_min}, {x_max, y_min}, {x_max, y_max}, {x_min, y_max}});
}

double FootprintPolygon::circumradius() const {
  double r = 0.0;
  for (const auto& v : vertices_) r = std::max(r, v.norm());
  return r;
}

double FootprintPolygon::width() const {
  if (vertices_.empty()) return 0.0;
  double lo = vertices_.front().y(), hi = lo;
  for (const auto& v : vertices_) {
    lo = std::min(lo, v.y());
    hi = std::max(hi, v.y());
  }
  return hi - lo;
}

bool FootprintPolygon::contains(const FootprintPolygon& inner) const {
  if (degenerate()) return false;
  const std::size_t n = vertices_.size();
  for (const auto& p : inner.vertices()) {
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d d = vertices_[(i + 1) % n] - vertices_[i];
      if (cross2(d, p - vertices_[i]) < -kEdgeEps * d.norm()) return false;
    }
  }
  return true;
}

std::vector<Eigen::Vector2d> FootprintPolygon::transformed(const Pose2d& pose) const {
  std::vector<Eigen::Vector2d> out;
  out.reserve(vertices_.size());
  for (const auto& v : vertices_) out.push_back(pose * v);
  return out;
}

bool convex_polygon_owns(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& a = poly[i];
    const Eigen::Vector2d d = poly[(i + 1) % n] - a;
    const double len = d.norm();
    const double s = cross2(d, p - a) / len;
    if (s > kEdgeEps) continue;
    if (s < -kEdgeEps) return false;
    const Eigen::Vector2d normal(d.y() / len, -d.x() / len);
    const bool owning_edge =
        normal.x() < -kEdgeEps || (std::abs(normal.x()) <= kEdgeEps && normal.y() < 0.0);
    if (!owning_edge) return false;
  }
  return true;
}

std::vector<CellIndex> rasterize_footprint(const FootprintPolygon& footprint, const Pose2d& pose,
                                           const GridMap2D& map) {
  std::vector<CellIndex> cells;
  const std::vector<Eigen::Vector2d> poly = footprint.transformed(pose);
  if (poly.empty()) return cells;
  if (footprint.degenerate()) {
    for (const auto& v : poly)
      if (auto c = map.world_to_cell(v)) cells.push_back(*c);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
  }
  const CellRange range = cells_overlapping_bbox(poly, map);
  if (range.empty()) return cells;
  for (int r = range.row_min; r <= range.row_max; ++r)
    for (int c = range.col_min; c <= range.col_max; ++c)
      if (convex_polygon_owns(poly, map.cell_center({r, c}))) cells.push_back({r, c});
  return cells;
}

std::vector<CellIndex> rasterize_polygon(const std::vector<Eigen::Vector2d>& polygon,
                                         const GridMap2D& map) {
  std::vector<CellIndex> cells;
  if (polygon.size() < 3) return cells;
  const CellRange range = cells_overlapping_bbox(polygon, map);
  if (range.empty()) return cells;
  const std::size_t n = polygon.size();
  for (int r = range.row_min; r <= range.row_max; ++r) {
    for (int c = range.col_min; c <= range.col_max; ++c) {
      const Eigen::Vector2d p = map.cell_center({r, c});
      bool inside = false;
      for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d& a = polygon[i];
        const Eigen::Vector2d& b = polygon[(i + 1) % n];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
          const double x_cross = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
          if (x_cross > p.x()) inside = !inside;
        }
      }
      if (inside) cells.push_back({r, c});
    }
  }
  return cells;
}

}  // namespace harvest
