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
#include <iosfwd>
#include <string>
#include <vector>

#include "harvest_nav/approach.hpp"
#include "harvest_nav/forest_sim.hpp"
#include "harvest_nav/nav_control.hpp"
#include "harvest_nav/planner.hpp"
#include "harvest_nav/tree_detection.hpp"

namespace harvest {

// Reports are comma-delimited tables preceded by `# key = value` lines that
// echo the configuration. Undefined values print as `n/a`.

struct PlannerBenchConfig {
  ScenarioKind kind = ScenarioKind::kAlley;
  std::vector<double> densities{0.01, 0.05, 0.1, 0.15, 0.2, 0.3};
  int trials = 10;             // plan attempts per feasible target
  int worlds_per_density = 1;  // pooled worlds
  int max_targets = 50;        // targets probed per world
  int max_trial_targets = 0;   // feasible targets given trials per world, 0 = all
  std::uint64_t seed = 1;
  double extent = 50.0;
  double resolution = 0.1;
  double plan_budget = 5.0;   // s
  int plan_iterations = 0;    // 0 = time budget only
  double probe_budget = 30.0; // s
  int probe_iterations = 0;
  bool timing_columns = true;
  int threads = 1;
  ApproachParams approach;
  RRTParams rrt;
};

struct PlannerTrial {
  double density = 0.0;
  int world = 0;
  int target = 0;  // tree index
  int trial = 0;
  PlanStatus status = PlanStatus::kNotAttained;
  PlanResult result;
};

struct PlannerBenchRow {
  double density = 0.0;
  int n_trees = 0;
  int n_targets = 0;
  int n_feasible = 0;
  int attempts = 0;
  int successes = 0;
  double success_rate = 0.0;  // NaN without attempts
  double feasible_fraction = 0.0;
  // Means over successful attempts.
  double t_approach = 0.0;
  double t_init = 0.0;
  double t_total = 0.0;
  double d_init = 0.0;
  double d_final = 0.0;
  double d_lb = 0.0;
  double median_ratio = 0.0;  // median d_final / d_lb
};

struct PlannerBenchReport {
  PlannerBenchConfig config;
  std::vector<PlannerBenchRow> rows;
  std::vector<PlannerTrial> trials;
};

PlannerBenchReport bench_planner(const PlannerBenchConfig& config);
void write_report(std::ostream& out, const PlannerBenchReport& report);

/// Scenario used for world `w` at `density` of a planner bench.
ScenarioSpec bench_scenario(const PlannerBenchConfig& config, double density, int world);

struct TrackingBenchConfig {
  double suite_length = 1000.0;  // m of reference path per suite
  double path_density = 0.05;    // tree density of the worlds the paths are planned in
  int max_worlds = 40;
  std::uint64_t seed = 1;
  int plan_iterations = 500;
  double min_run_length = 2.0;   // shorter direction runs are not used alone
  int maneuver_min_cusps = 2;
  std::vector<double> slips{0.0};
  VehicleModel vehicle;
  TrackerParams tracker;
  double dt = 0.05;
};

struct TrackingBenchRow {
  std::string suite;  // forward, reverse, maneuvering
  double slip = 0.0;
  int paths = 0;
  int completed = 0;
  double mean_track_error = 0.0;  // length-weighted over trials
  double max_track_error = 0.0;
  double length_forward = 0.0;
  double length_reverse = 0.0;
  double cusps = 0.0;  // mean per path
  double traveled_total = 0.0;
};

struct TrackingBenchReport {
  TrackingBenchConfig config;
  std::vector<TrackingBenchRow> rows;
};

/// Reference paths for the three suites, planned in alley worlds.
struct TrackingSuites {
  std::vector<PathSE2> forward, reverse, maneuvering;
};
TrackingSuites tracking_suites(const TrackingBenchConfig& config);

/// `path` driven backwards: poses in reverse order, every direction flipped.
PathSE2 reversed(const PathSE2& path);

TrackingBenchReport bench_tracking(const TrackingBenchConfig& config);
void write_report(std::ostream& out, const TrackingBenchReport& report);

struct DetectionBenchConfig {
  int patches = 100;
  double patch_size = 6.0;
  double tree_density = 0.05;
  std::vector<double> clutter_densities{0.0};
  double point_density = 400.0;  // points per m^2 of surface
  double point_sigma = 0.01;
  double match_radius = 0.5;
  std::uint64_t seed = 1;
  DetectParams detect;
  double min_points_fraction = 0.5;
};

struct DetectionBenchRow {
  double clutter_density = 0.0;
  int patches = 0;
  int trees = 0;  // ground-truth trees over all patches
  int detections = 0;
  int true_positives = 0;
  double precision = 0.0;  // totals; NaN when undefined
  double recall = 0.0;
  double precision_mean = 0.0;  // over patches where defined
  double precision_std = 0.0;
  double recall_mean = 0.0;
  double recall_std = 0.0;
};

struct DetectionBenchReport {
  DetectionBenchConfig config;
  std::vector<DetectionBenchRow> rows;
};

/// Per-patch counts against the trees whose center lies in `patch` and which
/// received at least min_points samples inside the z crop.
struct PatchScore {
  int trees = 0;
  int detections = 0;
  int true_positives = 0;   // matched ground-truth trees
  int false_positives = 0;  // detections matching no tree at all
};
PatchScore score_patch(const ForestWorld& world, const Rect& patch, const DetectionBenchConfig& config,
                       std::uint64_t seed);

DetectionBenchReport bench_detection(const DetectionBenchConfig& config);
void write_report(std::ostream& out, const DetectionBenchReport& report);

/// Outcome of one benchmark assertion.
struct BenchCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // measured values
};

/// Success >= 0.90 on feasible targets for densities <= 0.15, median
/// d_final / d_lb <= 1.2 over all successes, and a negative rank
/// correlation of feasible fraction with density.
std::vector<BenchCheck> check_alley(const PlannerBenchReport& report);
/// Success at the highest density >= the lowest success among the densities
/// strictly inside the sweep; with `alley`, feasible fraction at 0.3 at most a
/// quarter of the alley's.
std::vector<BenchCheck> check_unstructured(const PlannerBenchReport& report,
                                           const PlannerBenchReport* alley = nullptr);
/// Slip-free: each suite >= suite_length traveled, mean error <= 0.10 m on
/// forward and reverse, <= 0.15 m and >= 2 cusps per path on maneuvering.
/// Error non-decreasing in slip per suite.
std::vector<BenchCheck> check_tracking(const TrackingBenchReport& report);
/// Clutter-free row: >= 90 patches, recall >= 0.85, precision >= 0.90.
/// Recall at the heaviest clutter not above the clutter-free recall.
std::vector<BenchCheck> check_detection(const DetectionBenchReport& report);

/// Spearman rank correlation (average ranks for ties). NaN for fewer than two
/// points or a constant input.
double rank_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace harvest
