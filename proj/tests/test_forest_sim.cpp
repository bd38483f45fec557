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

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "harvest_nav/footprint.hpp"
#include "harvest_nav/forest_sim.hpp"

namespace harvest {
namespace {

ScenarioSpec alley(double density, std::uint64_t seed) {
  ScenarioSpec s;
  s.kind = ScenarioKind::kAlley;
  s.density = density;
  s.seed = seed;
  return s;
}

ScenarioSpec unstructured(double density, std::uint64_t seed) {
  ScenarioSpec s;
  s.kind = ScenarioKind::kUnstructured;
  s.target_rule = TargetRule::kRandomMax50;
  s.density = density;
  s.seed = seed;
  return s;
}

TEST(GenerateForest, ZeroDensityHasNoTrees) {
  EXPECT_TRUE(generate_forest(alley(0.0, 1)).trees.empty());
  EXPECT_TRUE(generate_forest(unstructured(0.0, 1)).trees.empty());
}

TEST(GenerateForest, PoissonMeanOverSeeds) {
  const double expected = 0.1 * (2500.0 - 100.0);
  EXPECT_DOUBLE_EQ(free_area(unstructured(0.1, 0)), 2400.0);
  const int seeds = 1000;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) sum += generate_forest(unstructured(0.1, s)).trees.size();
  const double mean = sum / seeds;
  const double standard_error = std::sqrt(expected / seeds);
  EXPECT_NEAR(mean, expected, 3.0 * standard_error);
}

TEST(GenerateForest, AlleyStripIsClearAndTreesDoNotOverlap) {
  for (double density : {0.01, 0.1, 0.3}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const ScenarioSpec spec = alley(density, seed);
      const ForestWorld w = generate_forest(spec);
      for (std::size_t i = 0; i < w.trees.size(); ++i) {
        const Tree& t = w.trees[i];
        EXPECT_TRUE(w.extent.contains(t.position));
        EXPECT_GE(std::abs(t.position.y() - w.alley_center_y), 0.5 * spec.alley_width + t.radius);
        EXPECT_GE(t.radius, spec.radius_min);
        EXPECT_LE(t.radius, spec.radius_max);
        EXPECT_GE(t.height, spec.height_min);
        EXPECT_LE(t.height, spec.height_max);
        for (std::size_t j = i + 1; j < w.trees.size(); ++j)
          EXPECT_GE((t.position - w.trees[j].position).norm(), t.radius + w.trees[j].radius);
      }
    }
  }
}

TEST(GenerateForest, ClearPatchIsClear) {
  const ForestWorld w = generate_forest(unstructured(0.3, 4));
  ASSERT_TRUE(w.clear_patch);
  for (const Tree& t : w.trees) {
    const Eigen::Vector2d q = t.position.cwiseMax(w.clear_patch->min).cwiseMin(w.clear_patch->max);
    EXPECT_GE((q - t.position).norm(), t.radius);
  }
}

TEST(GenerateForest, DeterministicPerSeed) {
  const ForestWorld a = generate_forest(alley(0.1, 42));
  const ForestWorld b = generate_forest(alley(0.1, 42));
  const ForestWorld c = generate_forest(alley(0.1, 43));
  std::ostringstream sa, sb, sc;
  write_world(sa, a);
  write_world(sb, b);
  write_world(sc, c);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NE(sa.str(), sc.str());
}

TEST(GenerateForest, ExtremeDensityFailsExplicitly) {
  ScenarioSpec s = unstructured(5.0, 1);
  s.max_attempts_per_tree = 50;
  EXPECT_THROW(generate_forest(s), ForestGenerationError);
}

TEST(GenerateForest, RejectsInvalidSpec) {
  ScenarioSpec s = alley(0.1, 1);
  s.alley_width = 2.7;
  EXPECT_THROW(generate_forest(s), std::invalid_argument);
  s = alley(-0.1, 1);
  EXPECT_THROW(generate_forest(s), std::invalid_argument);
}

TEST(GenerateForest, AlleyAdmitsVehicleAlongCenterline) {
  const auto body = FootprintPolygon::Rectangle(-3.0, 3.0, -1.2, 1.2);
  for (double width : {2.8, 4.0}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ScenarioSpec spec = alley(0.3, seed);
      spec.alley_width = width;
      const ForestWorld w = generate_forest(spec);
      const GridMap2D occ = true_occupancy(w, 0.1);
      const auto& layer = occ.layer(layers::kOccupancy);
      for (double x = 3.0; x <= 47.0; x += 0.5)
        for (const auto& c : rasterize_footprint(body, Pose2d(x, w.alley_center_y, 0.0), occ))
          ASSERT_EQ(layer(c.row, c.col), 0.0) << "width " << width << " x " << x;
    }
  }
}

TEST(SelectTargets, EmptyWorld) {
  const ScenarioSpec spec = alley(0.0, 1);
  EXPECT_TRUE(select_targets(generate_forest(spec), spec).empty());
}

TEST(SelectTargets, AlleyRuleAndCap) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScenarioSpec spec = alley(0.3, seed);
    const ForestWorld w = generate_forest(spec);
    const auto targets = select_targets(w, spec);
    EXPECT_LE(targets.size(), 50u);
    EXPECT_GT(targets.size(), 0u);
    for (int id : targets) EXPECT_LE(std::abs(w.trees[id].position.y() - w.alley_center_y), 6.0);
    EXPECT_EQ(targets, select_targets(w, spec));
  }
}

TEST(SelectTargets, RandomRuleCapsAtFifty) {
  const ScenarioSpec spec = unstructured(0.1, 3);
  const ForestWorld w = generate_forest(spec);
  const auto targets = select_targets(w, spec);
  EXPECT_EQ(targets.size(), 50u);
  std::vector<int> sorted = targets;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::unique(sorted.begin(), sorted.end()), sorted.end());
}

TEST(SampleCloud, EmptyCases) {
  ForestWorld w;
  w.extent = {{0, 0}, {10, 10}};
  EXPECT_TRUE(sample_cloud(w, w.extent, 0.0, {}, 1).empty());
}

TEST(SampleCloud, TrunkPointsOnExactRadius) {
  ForestWorld w;
  w.extent = {{0, 0}, {10, 10}};
  w.trees.push_back({{5.0, 5.0}, 0.25, 8.0});
  std::vector<int> labels;
  const PointCloud3 cloud = sample_cloud(w, w.extent, 100.0, {}, 5, &labels);
  ASSERT_EQ(labels.size(), cloud.size());
  int trunk = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (labels[i] != 0) continue;
    ++trunk;
    EXPECT_NEAR((cloud.points[i].head<2>() - w.trees[0].position).norm(), 0.25, 1e-12);
    EXPECT_GE(cloud.points[i].z(), 0.0);
    EXPECT_LE(cloud.points[i].z(), 8.0);
  }
  EXPECT_GT(trunk, 1000);
  EXPECT_TRUE(cloud.all_finite());
}

TEST(SampleCloud, FlatGroundNoiseMean) {
  ForestWorld w;
  w.extent = {{0, 0}, {20, 20}};
  NoiseModel noise;
  noise.point_sigma = 0.02;
  const PointCloud3 cloud = sample_cloud(w, w.extent, 50.0, noise, 9);
  ASSERT_GT(cloud.size(), 10000u);
  double mean = 0.0;
  for (const auto& p : cloud.points) mean += p.z();
  mean /= cloud.size();
  EXPECT_LE(std::abs(mean), 3.0 * 0.02 / std::sqrt(double(cloud.size())));
}

TEST(SampleCloud, DeterministicAndRegionBounded) {
  const ForestWorld w = generate_forest(alley(0.1, 2));
  const Rect region{{10, 20}, {16, 26}};
  const PointCloud3 a = sample_cloud(w, region, 20.0, {0, 0, 0.01}, 3);
  const PointCloud3 b = sample_cloud(w, region, 20.0, {0, 0, 0.01}, 3);
  EXPECT_EQ(a.points, b.points);
  const PointCloud3 clean = sample_cloud(w, region, 20.0, {}, 3);
  for (const auto& p : clean.points) EXPECT_TRUE(region.contains(p.head<2>()));
}

TEST(CorruptPose, ZeroSigmaIsIdentity) {
  const Pose2d p(3, 4, 1.0);
  const Pose2d q = corrupt_pose(p, {}, 17);
  EXPECT_EQ(q.x(), p.x());
  EXPECT_EQ(q.y(), p.y());
  EXPECT_EQ(q.yaw(), p.yaw());
}

TEST(CorruptPose, RayleighMeanRadialOffset) {
  NoiseModel noise;
  noise.pose_sigma_xy = 0.3;
  const int n = 10000;
  double sum = 0.0;
  for (int s = 0; s < n; ++s) sum += planar_distance(corrupt_pose(Pose2d(), noise, s), Pose2d());
  const double expected = 0.3 * std::sqrt(std::numbers::pi / 2.0);
  const double se = 0.3 * std::sqrt((4.0 - std::numbers::pi) / 2.0) / std::sqrt(double(n));
  EXPECT_NEAR(sum / n, expected, 3.0 * se);
}

TEST(CorruptPose, YawStaysNormalized) {
  NoiseModel noise;
  noise.pose_sigma_yaw = 2.0;
  for (int s = 0; s < 500; ++s) {
    const double yaw = corrupt_pose(Pose2d(0, 0, 3.1), noise, s).yaw();
    EXPECT_GT(yaw, -std::numbers::pi);
    EXPECT_LE(yaw, std::numbers::pi);
  }
}

TEST(Rasterize, TrunkCellsRaisedAndOccupied) {
  ForestWorld w;
  w.extent = {{0, 0}, {10, 10}};
  w.trees.push_back({{5.0, 5.0}, 0.3, 12.0});
  const GridMap2D elev = rasterize_world(w, 0.1);
  const GridMap2D occ = true_occupancy(w, 0.1);
  const auto cell = elev.world_to_cell({5.0, 5.0});
  ASSERT_TRUE(cell);
  EXPECT_EQ(elev.at(layers::kElevation, *cell), 12.0);
  EXPECT_EQ(occ.at(layers::kOccupancy, *cell), 1.0);
  EXPECT_EQ(elev.at(layers::kElevation, {0, 0}), 0.0);
  EXPECT_EQ(occ.layer(layers::kOccupancy).sum(), elev.layer(layers::kElevation).cwiseSign().sum());
}

TEST(ScenarioFile, RoundTrip) {
  ScenarioSpec s = unstructured(0.2, 99);
  s.clear_patch = 12.0;
  std::ostringstream out;
  write_scenario(out, s);
  std::istringstream in(out.str());
  const ScenarioSpec back = parse_scenario(in);
  std::ostringstream again;
  write_scenario(again, back);
  EXPECT_EQ(out.str(), again.str());
}

TEST(ScenarioFile, Defaults) {
  std::istringstream in("# comment\nkind = unstructured\ndensity = 0.05\nseed = 7\n");
  const ScenarioSpec s = parse_scenario(in);
  EXPECT_EQ(s.kind, ScenarioKind::kUnstructured);
  EXPECT_EQ(s.target_rule, TargetRule::kRandomMax50);
  EXPECT_EQ(s.seed, 7u);
  std::istringstream bad("kind = alley\nfoo = 3\n");
  EXPECT_THROW(parse_scenario(bad), std::invalid_argument);
  std::istringstream narrow("kind = alley\nalley_width = 2\n");
  EXPECT_THROW(parse_scenario(narrow), std::invalid_argument);
}

TEST(WorldFile, RoundTrip) {
  ScenarioSpec spec = alley(0.05, 8);
  spec.ground_amplitude = 0.5;
  spec.clutter_density = 0.01;
  const ForestWorld w = generate_forest(spec);
  std::ostringstream out;
  write_world(out, w);
  std::istringstream in(out.str());
  const ForestWorld back = read_world(in);
  ASSERT_EQ(back.trees.size(), w.trees.size());
  EXPECT_EQ(back.trees.back().position, w.trees.back().position);
  EXPECT_EQ(back.alley_width, w.alley_width);
  EXPECT_EQ(back.ground.elevation(3.0, 7.0), w.ground.elevation(3.0, 7.0));
  EXPECT_EQ(back.clutter.size(), w.clutter.size());
}

}  // namespace
}  // namespace harvest
