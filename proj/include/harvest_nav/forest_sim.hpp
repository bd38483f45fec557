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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "harvest_nav/geometry.hpp"
#include "harvest_nav/grid_map.hpp"
#include "harvest_nav/point_cloud.hpp"

namespace harvest {

struct Tree {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double radius = 0.2;
  double height = 10.0;
};

/// Low vegetation or canopy blob, sampled as a solid ellipsoid with
/// semiaxes (radius, radius, height / 2) whose bottom sits `base` above ground.
struct ClutterBlob {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double radius = 0.5;
  double height = 1.0;
  double base = 0.0;
};

struct Rect {
  Eigen::Vector2d min = Eigen::Vector2d::Zero();
  Eigen::Vector2d max = Eigen::Vector2d::Zero();

  double area() const { return (max - min).prod(); }
  Eigen::Vector2d center() const { return 0.5 * (min + max); }
  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= min.x() && p.y() >= min.y() && p.x() <= max.x() && p.y() <= max.y();
  }
};

/// Ground height: base + sum of a_i * sin(kx_i x + ky_i y + phase_i).
struct GroundModel {
  struct Wave {
    double amplitude = 0.0;
    double kx = 0.0;
    double ky = 0.0;
    double phase = 0.0;
  };
  double base = 0.0;
  std::vector<Wave> waves;

  double elevation(double x, double y) const;
  double elevation(const Eigen::Vector2d& p) const { return elevation(p.x(), p.y()); }
};

enum class ScenarioKind { kAlley, kUnstructured, kFromFile };
enum class TargetRule { kAlongAlley, kRandomMax50 };

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kAlley;
  double density = 0.05;       // trees per m^2
  double alley_width = 4.0;    // m, alley kind only
  double clear_patch = 10.0;   // side of the square clear patch, unstructured kind only
  TargetRule target_rule = TargetRule::kAlongAlley;
  std::uint64_t seed = 1;

  double extent_x = 50.0;
  double extent_y = 50.0;
  double radius_min = 0.1;
  double radius_max = 0.4;
  double height_min = 5.0;
  double height_max = 20.0;
  double target_alley_distance = 6.0;
  int max_targets = 50;
  int max_attempts_per_tree = 1000;

  double clutter_density = 0.0;  // blobs per m^2
  double clutter_radius_min = 0.3;
  double clutter_radius_max = 1.0;
  double clutter_height_min = 0.3;
  double clutter_height_max = 1.2;

  double ground_amplitude = 0.0;  // 0 gives a flat plane
  double ground_wavelength = 25.0;

  std::string world_file;  // from-file kind
};

struct ForestWorld {
  Rect extent;
  GroundModel ground;
  std::vector<Tree> trees;
  std::vector<ClutterBlob> clutter;
  ScenarioKind kind = ScenarioKind::kAlley;
  double alley_center_y = 0.0;
  double alley_width = 0.0;
  std::optional<Rect> clear_patch;
};

struct NoiseModel {
  double pose_sigma_xy = 0.0;
  double pose_sigma_yaw = 0.0;
  double point_sigma = 0.0;
};

struct ForestGenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument for an invalid spec and ForestGenerationError
/// ("cannot place trees") when rejection sampling runs out of attempts.
ForestWorld generate_forest(const ScenarioSpec& spec);

/// Area in which tree centers may be placed (extent minus alley strip or clear patch).
double free_area(const ScenarioSpec& spec);

/// Indices into world.trees, shuffled by the spec seed and capped at max_targets.
std::vector<int> select_targets(const ForestWorld& world, const ScenarioSpec& spec);

/// Pose the vehicle starts from: alley entrance facing +x, or the clear patch center.
Pose2d default_start_pose(const ForestWorld& world);

/// Point source label: kGroundLabel, kClutterLabel or the index of the tree.
inline constexpr int kGroundLabel = -1;
inline constexpr int kClutterLabel = -2;

/// Ground points as a Poisson scatter at `density` per m^2 over `region`,
/// trunks as cylinder shells, clutter as solid ellipsoids, all at the same
/// areal density, then isotropic Gaussian noise of point_sigma.
PointCloud3 sample_cloud(const ForestWorld& world, const Rect& region, double density,
                         const NoiseModel& noise, std::uint64_t seed,
                         std::vector<int>* labels = nullptr);

Pose2d corrupt_pose(const Pose2d& true_pose, const NoiseModel& noise, std::uint64_t seed);

/// Ground-truth elevation map: ground height per cell, raised to the top of a
/// trunk on every cell whose center is within radius + res/2 of a tree axis.
GridMap2D rasterize_world(const ForestWorld& world, double resolution);

/// Occupancy layer marking cells whose centers are within radius + res/2 of a trunk.
GridMap2D true_occupancy(const ForestWorld& world, double resolution);

/// Seeded engine; distinct `stream` values give independent sequences.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

// Scenario file: one `key = value` per line, '#' comments. Keys match the
// ScenarioSpec field names.
ScenarioSpec parse_scenario(std::istream& in);
void write_scenario(std::ostream& out, const ScenarioSpec& spec);
ScenarioSpec load_scenario(const std::filesystem::path& path);

// World file: `extent xmin ymin xmax ymax`, `alley center_y width`,
// `patch xmin ymin xmax ymax`, `ground base`, `wave a kx ky phase`,
// `tree x y radius height`, `clutter x y radius height base`.
void write_world(std::ostream& out, const ForestWorld& world);
ForestWorld read_world(std::istream& in);

std::string to_string(ScenarioKind kind);
std::string to_string(TargetRule rule);

}  // namespace harvest
