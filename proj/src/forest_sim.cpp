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

#include "harvest_nav/forest_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "harvest_nav/map_io.hpp"

namespace harvest {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum Stream : std::uint64_t { kTreeStream = 0, kTargetStream = 1, kClutterStream = 2, kGroundStream = 3 };

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

long poisson(std::mt19937_64& rng, double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<long>(mean)(rng);
}

void validate(const ScenarioSpec& spec) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("scenario: " + what); };
  if (!(spec.density >= 0.0)) fail("density must be >= 0");
  if (!(spec.extent_x > 0.0 && spec.extent_y > 0.0)) fail("extent must be positive");
  if (!(spec.radius_min > 0.0 && spec.radius_max >= spec.radius_min)) fail("bad radius range");
  if (!(spec.height_min > 0.0 && spec.height_max >= spec.height_min)) fail("bad height range");
  if (spec.kind == ScenarioKind::kAlley && !(spec.alley_width >= 2.8))
    fail("alley_width must be >= 2.8");
  if (spec.kind == ScenarioKind::kAlley && spec.alley_width >= spec.extent_y)
    fail("alley wider than the world");
  if (spec.kind == ScenarioKind::kUnstructured &&
      !(spec.clear_patch >= 0.0 && spec.clear_patch <= std::min(spec.extent_x, spec.extent_y)))
    fail("clear_patch must fit in the world");
  if (!(spec.clutter_density >= 0.0)) fail("clutter_density must be >= 0");
  if (spec.max_targets < 0) fail("max_targets must be >= 0");
  if (spec.max_attempts_per_tree < 1) fail("max_attempts_per_tree must be >= 1");
}

// True if a disk of `radius` at p intersects the area reserved for driving.
bool in_reserved_area(const ForestWorld& world, const Eigen::Vector2d& p, double radius) {
  if (world.alley_width > 0.0 &&
      std::abs(p.y() - world.alley_center_y) < 0.5 * world.alley_width + radius)
    return true;
  if (world.clear_patch) {
    const Rect& r = *world.clear_patch;
    const Eigen::Vector2d q = p.cwiseMax(r.min).cwiseMin(r.max);
    if ((q - p).norm() < radius) return true;
  }
  return false;
}

class TreeIndex {
 public:
  TreeIndex(const Rect& extent, double cell) : min_(extent.min), cell_(cell) {
    cols_ = std::max(1, static_cast<int>(std::ceil((extent.max.x() - extent.min.x()) / cell)));
    rows_ = std::max(1, static_cast<int>(std::ceil((extent.max.y() - extent.min.y()) / cell)));
    buckets_.resize(static_cast<std::size_t>(rows_) * cols_);
  }

  bool overlaps(const std::vector<Tree>& trees, const Eigen::Vector2d& p, double r) const {
    const auto [row, col] = bucket(p);
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = row + dr, cc = col + dc;
        if (rr < 0 || cc < 0 || rr >= rows_ || cc >= cols_) continue;
        for (int i : buckets_[static_cast<std::size_t>(rr) * cols_ + cc])
          if ((trees[i].position - p).norm() < trees[i].radius + r) return true;
      }
    return false;
  }

  void insert(const Eigen::Vector2d& p, int index) {
    const auto [row, col] = bucket(p);
    buckets_[static_cast<std::size_t>(row) * cols_ + col].push_back(index);
  }

 private:
  std::pair<int, int> bucket(const Eigen::Vector2d& p) const {
    const int c = std::clamp(static_cast<int>((p.x() - min_.x()) / cell_), 0, cols_ - 1);
    const int r = std::clamp(static_cast<int>((p.y() - min_.y()) / cell_), 0, rows_ - 1);
    return {r, c};
  }

  Eigen::Vector2d min_;
  double cell_;
  int rows_ = 1, cols_ = 1;
  std::vector<std::vector<int>> buckets_;
};

ScenarioKind parse_kind(const std::string& s) {
  if (s == "alley") return ScenarioKind::kAlley;
  if (s == "unstructured") return ScenarioKind::kUnstructured;
  if (s == "from-file") return ScenarioKind::kFromFile;
  throw std::invalid_argument("unknown scenario kind '" + s + "'");
}

TargetRule parse_rule(const std::string& s) {
  if (s == "along-alley-within-6m") return TargetRule::kAlongAlley;
  if (s == "random-max-50") return TargetRule::kRandomMax50;
  throw std::invalid_argument("unknown target rule '" + s + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

double GroundModel::elevation(double x, double y) const {
  double z = base;
  for (const auto& w : waves) z += w.amplitude * std::sin(w.kx * x + w.ky * y + w.phase);
  return z;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

double free_area(const ScenarioSpec& spec) {
  const double area = spec.extent_x * spec.extent_y;
  switch (spec.kind) {
    case ScenarioKind::kAlley:
      return area - spec.extent_x * spec.alley_width;
    case ScenarioKind::kUnstructured:
      return area - spec.clear_patch * spec.clear_patch;
    case ScenarioKind::kFromFile:
      break;
  }
  return area;
}

ForestWorld generate_forest(const ScenarioSpec& spec) {
  if (spec.kind == ScenarioKind::kFromFile) {
    std::ifstream in(spec.world_file);
    if (!in) throw std::invalid_argument("cannot open world file '" + spec.world_file + "'");
    ForestWorld world = read_world(in);
    world.kind = ScenarioKind::kFromFile;
    return world;
  }
  validate(spec);

  ForestWorld world;
  world.kind = spec.kind;
  world.extent = {Eigen::Vector2d::Zero(), Eigen::Vector2d(spec.extent_x, spec.extent_y)};
  if (spec.kind == ScenarioKind::kAlley) {
    world.alley_center_y = 0.5 * spec.extent_y;
    world.alley_width = spec.alley_width;
  } else if (spec.clear_patch > 0.0) {
    const Eigen::Vector2d half = Eigen::Vector2d::Constant(0.5 * spec.clear_patch);
    world.clear_patch = Rect{world.extent.center() - half, world.extent.center() + half};
  }

  if (spec.ground_amplitude > 0.0) {
    auto rng = make_rng(spec.seed, kGroundStream);
    const double k = kTwoPi / spec.ground_wavelength;
    for (int i = 0; i < 2; ++i) {
      const double dir = uniform(rng, 0.0, kTwoPi);
      world.ground.waves.push_back({0.5 * spec.ground_amplitude, k * std::cos(dir),
                                    k * std::sin(dir), uniform(rng, 0.0, kTwoPi)});
    }
  }

  auto rng = make_rng(spec.seed, kTreeStream);
  const long count = poisson(rng, spec.density * free_area(spec));
  TreeIndex index(world.extent, 2.0 * spec.radius_max);
  world.trees.reserve(static_cast<std::size_t>(count));
  for (long t = 0; t < count; ++t) {
    bool placed = false;
    for (int attempt = 0; attempt < spec.max_attempts_per_tree && !placed; ++attempt) {
      const Eigen::Vector2d p(uniform(rng, world.extent.min.x(), world.extent.max.x()),
                              uniform(rng, world.extent.min.y(), world.extent.max.y()));
      const double r = uniform(rng, spec.radius_min, spec.radius_max);
      if (in_reserved_area(world, p, r) || index.overlaps(world.trees, p, r)) continue;
      const double h = uniform(rng, spec.height_min, spec.height_max);
      index.insert(p, static_cast<int>(world.trees.size()));
      world.trees.push_back({p, r, h});
      placed = true;
    }
    if (!placed)
      throw ForestGenerationError("cannot place trees: density " + format_double(spec.density) +
                                  " exhausted the attempt budget");
  }

  auto crng = make_rng(spec.seed, kClutterStream);
  const long blobs = poisson(crng, spec.clutter_density * world.extent.area());
  for (long b = 0; b < blobs; ++b) {
    ClutterBlob blob;
    blob.position = {uniform(crng, world.extent.min.x(), world.extent.max.x()),
                     uniform(crng, world.extent.min.y(), world.extent.max.y())};
    blob.radius = uniform(crng, spec.clutter_radius_min, spec.clutter_radius_max);
    blob.height = uniform(crng, spec.clutter_height_min, spec.clutter_height_max);
    if (in_reserved_area(world, blob.position, blob.radius)) continue;
    world.clutter.push_back(blob);
  }
  return world;
}

std::vector<int> select_targets(const ForestWorld& world, const ScenarioSpec& spec) {
  std::vector<int> candidates;
  const double center =
      world.alley_width > 0.0 ? world.alley_center_y : world.extent.center().y();
  for (int i = 0; i < static_cast<int>(world.trees.size()); ++i) {
    if (spec.target_rule == TargetRule::kAlongAlley &&
        std::abs(world.trees[i].position.y() - center) > spec.target_alley_distance)
      continue;
    candidates.push_back(i);
  }
  auto rng = make_rng(spec.seed, kTargetStream);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  if (static_cast<int>(candidates.size()) > spec.max_targets)
    candidates.resize(static_cast<std::size_t>(spec.max_targets));
  return candidates;
}

Pose2d default_start_pose(const ForestWorld& world) {
  if (world.alley_width > 0.0) return Pose2d(world.extent.min.x() + 4.0, world.alley_center_y, 0.0);
  if (world.clear_patch) {
    const Eigen::Vector2d c = world.clear_patch->center();
    return Pose2d(c.x(), c.y(), 0.0);
  }
  const Eigen::Vector2d c = world.extent.center();
  return Pose2d(c.x(), c.y(), 0.0);
}

PointCloud3 sample_cloud(const ForestWorld& world, const Rect& region, double density,
                         const NoiseModel& noise, std::uint64_t seed, std::vector<int>* labels) {
  PointCloud3 cloud;
  if (labels) labels->clear();
  if (!(density > 0.0)) return cloud;
  auto rng = make_rng(seed, 17);
  auto emit = [&](const Eigen::Vector3d& p, int label) {
    if (!region.contains(p.head<2>())) return;
    cloud.push_back(p);
    if (labels) labels->push_back(label);
  };

  const long n_ground = poisson(rng, density * region.area());
  for (long i = 0; i < n_ground; ++i) {
    const double x = uniform(rng, region.min.x(), region.max.x());
    const double y = uniform(rng, region.min.y(), region.max.y());
    emit({x, y, world.ground.elevation(x, y)}, kGroundLabel);
  }

  for (int t = 0; t < static_cast<int>(world.trees.size()); ++t) {
    const Tree& tree = world.trees[t];
    const Eigen::Vector2d q = tree.position.cwiseMax(region.min).cwiseMin(region.max);
    if ((q - tree.position).norm() > tree.radius) continue;
    const double z0 = world.ground.elevation(tree.position);
    const long n = poisson(rng, density * kTwoPi * tree.radius * tree.height);
    for (long i = 0; i < n; ++i) {
      const double th = uniform(rng, 0.0, kTwoPi);
      const double z = uniform(rng, 0.0, tree.height);
      emit({tree.position.x() + tree.radius * std::cos(th),
            tree.position.y() + tree.radius * std::sin(th), z0 + z},
           t);
    }
  }

  for (const ClutterBlob& blob : world.clutter) {
    const Eigen::Vector2d q = blob.position.cwiseMax(region.min).cwiseMin(region.max);
    if ((q - blob.position).norm() > blob.radius) continue;
    const double half_h = 0.5 * blob.height;
    const double zc = world.ground.elevation(blob.position) + blob.base + half_h;
    const double area = kTwoPi * blob.radius * (blob.radius + half_h);
    const long n = poisson(rng, density * area);
    for (long i = 0; i < n; ++i) {
      Eigen::Vector3d u;
      do {
        u = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
      } while (u.squaredNorm() > 1.0);
      emit({blob.position.x() + blob.radius * u.x(), blob.position.y() + blob.radius * u.y(),
            zc + half_h * u.z()},
           kClutterLabel);
    }
  }

  if (noise.point_sigma > 0.0) {
    std::normal_distribution<double> n(0.0, noise.point_sigma);
    for (auto& p : cloud.points) p += Eigen::Vector3d(n(rng), n(rng), n(rng));
  }
  return cloud;
}

Pose2d corrupt_pose(const Pose2d& true_pose, const NoiseModel& noise, std::uint64_t seed) {
  auto rng = make_rng(seed, 29);
  std::normal_distribution<double> n(0.0, 1.0);
  const double dx = n(rng) * noise.pose_sigma_xy;
  const double dy = n(rng) * noise.pose_sigma_xy;
  const double dyaw = n(rng) * noise.pose_sigma_yaw;
  return Pose2d(true_pose.x() + dx, true_pose.y() + dy, true_pose.yaw() + dyaw);
}

namespace {

template <typename Fn>
void for_each_disk_cell(const GridMap2D& map, const Eigen::Vector2d& c, double radius, Fn fn) {
  const CellIndex lo = map.world_to_cell_unchecked(c - Eigen::Vector2d::Constant(radius));
  const CellIndex hi = map.world_to_cell_unchecked(c + Eigen::Vector2d::Constant(radius));
  for (int r = std::max(0, lo.row); r <= std::min(map.rows() - 1, hi.row); ++r)
    for (int col = std::max(0, lo.col); col <= std::min(map.cols() - 1, hi.col); ++col)
      if ((map.cell_center({r, col}) - c).norm() <= radius) fn(r, col);
}

}  // namespace

GridMap2D rasterize_world(const ForestWorld& world, double resolution) {
  GridMap2D map = GridMap2D::covering(world.extent.min, world.extent.max, resolution);
  auto& elev = map.add_layer(layers::kElevation);
  for (int r = 0; r < map.rows(); ++r)
    for (int c = 0; c < map.cols(); ++c) elev(r, c) = world.ground.elevation(map.cell_center({r, c}));
  for (const Tree& t : world.trees) {
    const double top = world.ground.elevation(t.position) + t.height;
    for_each_disk_cell(map, t.position, t.radius + 0.5 * resolution,
                       [&](int r, int c) { elev(r, c) = std::max(elev(r, c), top); });
  }
  // Ground-touching clutter is an obstacle; floating canopy is not.
  for (const ClutterBlob& b : world.clutter) {
    if (b.base > 0.0) continue;
    const double top = world.ground.elevation(b.position) + b.height;
    for_each_disk_cell(map, b.position, b.radius,
                       [&](int r, int c) { elev(r, c) = std::max(elev(r, c), top); });
  }
  return map;
}

GridMap2D true_occupancy(const ForestWorld& world, double resolution) {
  GridMap2D map = GridMap2D::covering(world.extent.min, world.extent.max, resolution);
  auto& occ = map.add_layer(layers::kOccupancy, 0.0);
  for (const Tree& t : world.trees)
    for_each_disk_cell(map, t.position, t.radius + 0.5 * resolution,
                       [&](int r, int c) { occ(r, c) = 1.0; });
  return map;
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kAlley: return "alley";
    case ScenarioKind::kUnstructured: return "unstructured";
    case ScenarioKind::kFromFile: return "from-file";
  }
  return "alley";
}

std::string to_string(TargetRule rule) {
  return rule == TargetRule::kAlongAlley ? "along-alley-within-6m" : "random-max-50";
}

ScenarioSpec parse_scenario(std::istream& in) {
  ScenarioSpec spec;
  std::map<std::string, double*> reals{
      {"density", &spec.density},
      {"alley_width", &spec.alley_width},
      {"clear_patch", &spec.clear_patch},
      {"extent_x", &spec.extent_x},
      {"extent_y", &spec.extent_y},
      {"radius_min", &spec.radius_min},
      {"radius_max", &spec.radius_max},
      {"height_min", &spec.height_min},
      {"height_max", &spec.height_max},
      {"target_alley_distance", &spec.target_alley_distance},
      {"clutter_density", &spec.clutter_density},
      {"clutter_radius_min", &spec.clutter_radius_min},
      {"clutter_radius_max", &spec.clutter_radius_max},
      {"clutter_height_min", &spec.clutter_height_min},
      {"clutter_height_max", &spec.clutter_height_max},
      {"ground_amplitude", &spec.ground_amplitude},
      {"ground_wavelength", &spec.ground_wavelength},
  };
  bool rule_given = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("scenario line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (auto it = reals.find(key); it != reals.end()) {
        *it->second = parse_double(value);
      } else if (key == "kind") {
        spec.kind = parse_kind(value);
      } else if (key == "target_rule") {
        spec.target_rule = parse_rule(value);
        rule_given = true;
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else if (key == "max_targets") {
        spec.max_targets = std::stoi(value);
      } else if (key == "max_attempts_per_tree") {
        spec.max_attempts_per_tree = std::stoi(value);
      } else if (key == "world_file") {
        spec.world_file = value;
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) + ": value out of range");
    } catch (const FormatError& e) {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!rule_given)
    spec.target_rule =
        spec.kind == ScenarioKind::kAlley ? TargetRule::kAlongAlley : TargetRule::kRandomMax50;
  if (spec.kind != ScenarioKind::kFromFile) validate(spec);
  return spec;
}

void write_scenario(std::ostream& out, const ScenarioSpec& s) {
  auto kv = [&](const char* k, const std::string& v) { out << k << " = " << v << '\n'; };
  kv("kind", to_string(s.kind));
  kv("density", format_double(s.density));
  kv("alley_width", format_double(s.alley_width));
  kv("clear_patch", format_double(s.clear_patch));
  kv("target_rule", to_string(s.target_rule));
  kv("seed", std::to_string(s.seed));
  kv("extent_x", format_double(s.extent_x));
  kv("extent_y", format_double(s.extent_y));
  kv("radius_min", format_double(s.radius_min));
  kv("radius_max", format_double(s.radius_max));
  kv("height_min", format_double(s.height_min));
  kv("height_max", format_double(s.height_max));
  kv("target_alley_distance", format_double(s.target_alley_distance));
  kv("max_targets", std::to_string(s.max_targets));
  kv("max_attempts_per_tree", std::to_string(s.max_attempts_per_tree));
  kv("clutter_density", format_double(s.clutter_density));
  kv("clutter_radius_min", format_double(s.clutter_radius_min));
  kv("clutter_radius_max", format_double(s.clutter_radius_max));
  kv("clutter_height_min", format_double(s.clutter_height_min));
  kv("clutter_height_max", format_double(s.clutter_height_max));
  kv("ground_amplitude", format_double(s.ground_amplitude));
  kv("ground_wavelength", format_double(s.ground_wavelength));
  if (!s.world_file.empty()) kv("world_file", s.world_file);
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file " + path.string());
  ScenarioSpec spec = parse_scenario(in);
  if (!spec.world_file.empty() && std::filesystem::path(spec.world_file).is_relative())
    spec.world_file = (path.parent_path() / spec.world_file).string();
  return spec;
}

void write_world(std::ostream& out, const ForestWorld& w) {
  const auto f = format_double;
  out << "extent " << f(w.extent.min.x()) << ' ' << f(w.extent.min.y()) << ' '
      << f(w.extent.max.x()) << ' ' << f(w.extent.max.y()) << '\n';
  if (w.alley_width > 0.0) out << "alley " << f(w.alley_center_y) << ' ' << f(w.alley_width) << '\n';
  if (w.clear_patch)
    out << "patch " << f(w.clear_patch->min.x()) << ' ' << f(w.clear_patch->min.y()) << ' '
        << f(w.clear_patch->max.x()) << ' ' << f(w.clear_patch->max.y()) << '\n';
  out << "ground " << f(w.ground.base) << '\n';
  for (const auto& v : w.ground.waves)
    out << "wave " << f(v.amplitude) << ' ' << f(v.kx) << ' ' << f(v.ky) << ' ' << f(v.phase) << '\n';
  for (const auto& t : w.trees)
    out << "tree " << f(t.position.x()) << ' ' << f(t.position.y()) << ' ' << f(t.radius) << ' '
        << f(t.height) << '\n';
  for (const auto& b : w.clutter)
    out << "clutter " << f(b.position.x()) << ' ' << f(b.position.y()) << ' ' << f(b.radius) << ' '
        << f(b.height) << ' ' << f(b.base) << '\n';
}

ForestWorld read_world(std::istream& in) {
  ForestWorld w;
  w.kind = ScenarioKind::kFromFile;
  bool have_extent = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::vector<double> v;
    std::string tok;
    while (ls >> tok) v.push_back(parse_double(tok));
    auto need = [&](std::size_t n) {
      if (v.size() != n)
        throw FormatError("world line " + std::to_string(line_no) + ": '" + kw + "' needs " +
                          std::to_string(n) + " values");
    };
    if (kw == "extent") {
      need(4);
      w.extent = {{v[0], v[1]}, {v[2], v[3]}};
      have_extent = true;
    } else if (kw == "alley") {
      need(2);
      w.alley_center_y = v[0];
      w.alley_width = v[1];
    } else if (kw == "patch") {
      need(4);
      w.clear_patch = Rect{{v[0], v[1]}, {v[2], v[3]}};
    } else if (kw == "ground") {
      need(1);
      w.ground.base = v[0];
    } else if (kw == "wave") {
      need(4);
      w.ground.waves.push_back({v[0], v[1], v[2], v[3]});
    } else if (kw == "tree") {
      need(4);
      if (!(v[2] > 0.0 && v[3] > 0.0)) throw FormatError("tree radius and height must be > 0");
      w.trees.push_back({{v[0], v[1]}, v[2], v[3]});
    } else if (kw == "clutter") {
      need(5);
      w.clutter.push_back({{v[0], v[1]}, v[2], v[3], v[4]});
    } else {
      throw FormatError("world line " + std::to_string(line_no) + ": unknown record '" + kw + "'");
    }
  }
  if (!have_extent || !(w.extent.area() > 0.0)) throw FormatError("world file needs a positive extent");
  for (const auto& t : w.trees)
    if (!w.extent.contains(t.position)) throw FormatError("tree outside world extent");
  return w;
}

}  // namespace harvest
