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

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "harvest_nav/grid_map.hpp"
#include "harvest_nav/path.hpp"
#include "harvest_nav/point_cloud.hpp"

namespace harvest {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double; "nan" for NaN.
std::string format_double(double value);
double parse_double(const std::string& token);

// Grid map text format:
//   gridmap v1 <rows> <cols> <resolution> <origin_x> <origin_y> <nlayers>
//   layer <name>
//   <rows lines of cols values, row 0 first>
//   ...
void write_grid_map(std::ostream& out, const GridMap2D& map);
GridMap2D read_grid_map(std::istream& in);

// Point clouds: one "x y z" per line, '#' starts a comment.
void write_point_cloud(std::ostream& out, const PointCloud3& cloud);
PointCloud3 read_point_cloud(std::istream& in);

// Paths: one "x y yaw d" per pose, d = +1 / -1 for the segment to the next
// pose (forward / reverse) and 0 on the last line; '#' starts a comment.
void write_path(std::ostream& out, const PathSE2& path);
PathSE2 read_path(std::istream& in);

void save_grid_map(const std::filesystem::path& path, const GridMap2D& map);
GridMap2D load_grid_map(const std::filesystem::path& path);
void save_point_cloud(const std::filesystem::path& path, const PointCloud3& cloud);
PointCloud3 load_point_cloud(const std::filesystem::path& path);
void save_path(const std::filesystem::path& path, const PathSE2& p);
PathSE2 load_path(const std::filesystem::path& path);

}  // namespace harvest
