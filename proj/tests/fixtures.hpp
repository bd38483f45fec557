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

// Shared scene builders for unit tests and the acceptance suite.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "harvest_nav/forest_sim.hpp"
#include "harvest_nav/point_cloud.hpp"

namespace harvest::fixture {

/// Random 20 x 20 cell scene at res 0.1: rough ground, vertical columns
/// reaching from ground into canopy, floating blobs and scattered points.
inline PointCloud3 random_column_cloud(std::mt19937_64& rng, int max_points) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(200, max_points);
  const int n = count(rng);
  const double g0 = u(rng) * 2.0 - 1.0, gx = u(rng) * 0.4 - 0.2, gy = u(rng) * 0.4 - 0.2;
  PointCloud3 cloud;
  cloud.points.reserve(n);
  std::normal_distribution<double> noise(0.0, 0.03);
  const int columns = 1 + static_cast<int>(u(rng) * 4);
  std::vector<Eigen::Vector2d> col_xy;
  for (int k = 0; k < columns; ++k) col_xy.emplace_back(u(rng) * 2.0, u(rng) * 2.0);
  for (int i = 0; i < n; ++i) {
    const double kind = u(rng);
    double x = u(rng) * 2.0, y = u(rng) * 2.0;
    double z = g0 + gx * x + gy * y + noise(rng);
    if (kind < 0.15) {
      const auto& c = col_xy[static_cast<std::size_t>(u(rng) * columns) % columns];
      x = c.x() + 0.08 * (u(rng) - 0.5);
      y = c.y() + 0.08 * (u(rng) - 0.5);
      z = g0 + gx * x + gy * y + u(rng) * 4.0;
    } else if (kind < 0.35) {
      z += 0.5 + u(rng) * 3.0;
    } else if (kind < 0.37) {
      z += (u(rng) - 0.5) * 10.0;
    }
    cloud.push_back({std::clamp(x, 0.0, 1.999999), std::clamp(y, 0.0, 1.999999), z});
  }
  return cloud;
}

/// Points on the lateral surface of a cylinder.
inline PointCloud3 cylinder_shell(const Eigen::Vector3d& base, const Eigen::Vector3d& axis, double radius,
                                  double length, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::Vector3d a = axis.normalized();
  const Eigen::Vector3d e1 = a.unitOrthogonal();
  const Eigen::Vector3d e2 = a.cross(e1);
  PointCloud3 cloud;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * std::numbers::pi * u(rng);
    cloud.push_back(base + a * length * u(rng) + radius * (std::cos(th) * e1 + std::sin(th) * e2));
  }
  return cloud;
}

/// Trunks whose crowns or branches touch inside the crop band, so the stems
/// end up in a single cluster. Variant 0: two trunks joined by a branch band.
/// 1: three trunks in a row under one band. 2: a vertical trunk touching a
/// leaning neighbor. 3: two trunks 0.3 m apart (bark contact).
inline PointCloud3 merged_canopy(int variant, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointCloud3 cloud;
  auto add = [&](const PointCloud3& c) {
    for (const auto& q : c.points) cloud.push_back(q);
  };
  auto band = [&](double x0, double x1, int n) {
    for (int i = 0; i < n; ++i)
      cloud.push_back({x0 + (x1 - x0) * u(rng), -0.6 + 1.2 * u(rng), 2.2 + 0.6 * u(rng)});
  };
  switch (variant) {
    case 0:
      add(cylinder_shell({-1.0, 0, 0.7}, {0, 0, 1}, 0.2, 3.3, 3000, rng));
      add(cylinder_shell({1.0, 0, 0.7}, {0, 0, 1}, 0.2, 3.3, 3000, rng));
      band(-1.6, 1.6, 6000);
      break;
    case 1:
      for (double x : {-1.5, 0.0, 1.5}) add(cylinder_shell({x, 0, 0.7}, {0, 0, 1}, 0.2, 3.3, 3000, rng));
      band(-2.0, 2.0, 8000);
      break;
    case 2:
      add(cylinder_shell({0, 0, 0.7}, {0, 0, 1}, 0.2, 3.3, 3000, rng));
      add(cylinder_shell({2.2, 0, 0.7}, {-1.0, 0, 0.8}, 0.2, 3.3, 3000, rng));
      band(-0.4, 2.2, 5000);
      break;
    default:
      add(cylinder_shell({-0.25, 0, 0.7}, {0, 0, 1}, 0.2, 3.3, 3000, rng));
      add(cylinder_shell({0.25, 0, 0.7}, {0.35, 0, 1}, 0.2, 3.3, 3000, rng));
      add(cylinder_shell({-0.25, 0, 0.7}, {-0.35, 0, 1}, 0.2, 3.3, 3000, rng));
      break;
  }
  return cloud;
}

inline constexpr int kMergedCanopyVariants = 4;

}  // namespace harvest::fixture
