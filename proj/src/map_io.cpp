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

#include "harvest_nav/map_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace harvest {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  if (token == "nan" || token == "NaN" || token == "-nan") return GridMap2D::kNoData;
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw FormatError("cannot parse number '" + token + "'");
  return value;
}

void write_grid_map(std::ostream& out, const GridMap2D& map) {
  out << "gridmap v1 " << map.rows() << ' ' << map.cols() << ' '
      << format_double(map.resolution()) << ' ' << format_double(map.origin().x()) << ' '
      << format_double(map.origin().y()) << ' ' << map.layers().size() << '\n';
  for (const auto& [name, layer] : map.layers()) {
    out << "layer " << name << '\n';
    for (int r = 0; r < map.rows(); ++r) {
      for (int c = 0; c < map.cols(); ++c) {
        if (c) out << ' ';
        out << format_double(layer(r, c));
      }
      out << '\n';
    }
  }
}

GridMap2D read_grid_map(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty grid map stream");
  std::istringstream header(line);
  std::string magic, version, res_s, ox_s, oy_s;
  int rows = 0, cols = 0;
  std::size_t nlayers = 0;
  if (!(header >> magic >> version >> rows >> cols >> res_s >> ox_s >> oy_s >> nlayers) ||
      magic != "gridmap" || version != "v1")
    throw FormatError("bad grid map header: " + line);
  GridMap2D map;
  try {
    map = GridMap2D(rows, cols, parse_double(res_s),
                    Eigen::Vector2d(parse_double(ox_s), parse_double(oy_s)));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  for (std::size_t l = 0; l < nlayers; ++l) {
    if (!std::getline(in, line)) throw FormatError("missing layer header");
    std::istringstream lh(line);
    std::string kw, name;
    if (!(lh >> kw >> name) || kw != "layer") throw FormatError("bad layer header: " + line);
    auto& layer = map.add_layer(name);
    for (int r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) throw FormatError("truncated layer '" + name + "'");
      std::istringstream row(line);
      std::string tok;
      int c = 0;
      while (row >> tok) {
        if (c >= cols) throw FormatError("too many values in layer '" + name + "'");
        layer(r, c++) = parse_double(tok);
      }
      if (c != cols) throw FormatError("too few values in layer '" + name + "'");
    }
  }
  return map;
}

void write_point_cloud(std::ostream& out, const PointCloud3& cloud) {
  for (const auto& p : cloud.points)
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z())
        << '\n';
}

PointCloud3 read_point_cloud(std::istream& in) {
  PointCloud3 cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string xs, ys, zs, extra;
    if (!(ls >> xs)) continue;
    if (!(ls >> ys >> zs) || (ls >> extra))
      throw FormatError("line " + std::to_string(line_no) + ": expected 'x y z'");
    const Eigen::Vector3d p(parse_double(xs), parse_double(ys), parse_double(zs));
    if (!p.allFinite()) throw FormatError("line " + std::to_string(line_no) + ": non-finite point");
    cloud.push_back(p);
  }
  return cloud;
}

void write_path(std::ostream& out, const PathSE2& path) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Pose2d& p = path.poses()[i];
    const int d = i + 1 < path.size() ? static_cast<int>(sign_of(path.directions()[i])) : 0;
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.yaw()) << ' ' << d << '\n';
  }
}

PathSE2 read_path(std::istream& in) {
  std::vector<Pose2d> poses;
  std::vector<Direction> dirs;
  std::string line;
  std::size_t line_no = 0;
  int last = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string xs, ys, yaws, ds, extra;
    if (!(ls >> xs)) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!(ls >> ys >> yaws >> ds) || (ls >> extra)) throw FormatError(where + "expected 'x y yaw d'");
    if (!poses.empty()) {
      if (last == 0) throw FormatError(where + "pose after a terminal (d = 0) line");
      dirs.push_back(last > 0 ? Direction::kForward : Direction::kReverse);
    }
    const double x = parse_double(xs), y = parse_double(ys), yaw = parse_double(yaws);
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(yaw)) throw FormatError(where + "non-finite pose");
    if (ds == "1" || ds == "+1") last = 1;
    else if (ds == "-1") last = -1;
    else if (ds == "0") last = 0;
    else throw FormatError(where + "direction must be 1, -1 or 0");
    poses.emplace_back(x, y, yaw);
  }
  if (!poses.empty() && last != 0) throw FormatError("last pose must have d = 0");
  return PathSE2(std::move(poses), std::move(dirs));
}

namespace {
std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}
std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}
}  // namespace

void save_grid_map(const std::filesystem::path& path, const GridMap2D& map) {
  auto out = open_out(path);
  write_grid_map(out, map);
}

GridMap2D load_grid_map(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_grid_map(in);
}

void save_point_cloud(const std::filesystem::path& path, const PointCloud3& cloud) {
  auto out = open_out(path);
  write_point_cloud(out, cloud);
}

PointCloud3 load_point_cloud(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_point_cloud(in);
}

void save_path(const std::filesystem::path& path, const PathSE2& p) {
  auto out = open_out(path);
  write_path(out, p);
}

PathSE2 load_path(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_path(in);
}

}  // namespace harvest
