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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Planner suites run with iteration caps next to the wall
// clock budgets so results do not depend on machine speed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fixtures.hpp"
#include "harvest_nav/bench.hpp"
#include "harvest_nav/forest_sim.hpp"
#include "harvest_nav/mission.hpp"
#include "harvest_nav/reeds_shepp.hpp"
#include "harvest_nav/terrain.hpp"
#include "harvest_nav/tree_detection.hpp"
#include "oracles.hpp"
#include "rs_oracle.hpp"

namespace harvest {
namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(const std::string& name, bool passed, const std::string& detail) {
  std::cout << (passed ? "PASS " : "FAIL ") << name << " (" << detail << ")" << std::endl;
  if (!passed) ++g_failures;
}

void report(const std::vector<BenchCheck>& checks) {
  for (const BenchCheck& c : checks) report(c.name, c.passed, c.detail);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool same_cells(const GridMap2D& a, const GridMap2D& b) {
  if (!a.same_geometry(b)) return false;
  const auto& la = a.layer(layers::kElevation);
  const auto& lb = b.layer(layers::kElevation);
  for (int i = 0; i < la.size(); ++i) {
    const double x = la.data()[i], y = lb.data()[i];
    if (std::isnan(x) != std::isnan(y)) return false;
    if (!std::isnan(x) && x != y) return false;
  }
  return true;
}

void elevation_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridMap2D geometry(20, 20, 0.1, {0.05, 0.05});
  const int clouds = 100;
  int identical = 0;
  std::size_t max_points = 0;
  double module_time = 0.0;
  for (int i = 0; i < clouds; ++i) {
    const PointCloud3 cloud = fixture::random_column_cloud(rng, 50000);
    max_points = std::max(max_points, cloud.size());
    ElevationParams p;
    p.cluster_tolerance = 0.05 + 0.4 * u(rng);
    p.min_cluster_points = 1 + static_cast<int>(u(rng) * 4);
    const auto t0 = Clock::now();
    const GridMap2D got = cloud_to_elevation(cloud, p, geometry);
    module_time += seconds_since(t0);
    if (same_cells(got, oracle::elevation(cloud, geometry, p.cluster_tolerance, p.min_cluster_points))) ++identical;
  }
  report("elevation matches brute-force oracle", identical == clouds && max_points <= 50000,
         std::to_string(identical) + "/" + std::to_string(clouds) + " clouds identical, max points " +
             std::to_string(max_points));
  report("elevation conversion runtime < 60 s", module_time < 60.0, "total " + fmt(module_time, 2) + " s");
}

void elevation_ground_recovery() {
  const double sigma = 0.01;
  const double tolerance = 0.2;
  int scenes_ok = 0, checked = 0;
  double worst = 0.0;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pos(0.0, 6.0), base(1.0, 2.0);
  const int scenes = 5;
  for (int s = 0; s < scenes; ++s) {
    ForestWorld w;
    w.extent = {{0, 0}, {6, 6}};
    // Canopy blobs float at least 1 m above the ground, far beyond the tolerance.
    for (int i = 0; i < 8; ++i) w.clutter.push_back({{pos(rng), pos(rng)}, 0.8, 1.0, base(rng)});
    NoiseModel noise;
    noise.point_sigma = sigma;
    std::vector<int> labels;
    const PointCloud3 cloud = sample_cloud(w, w.extent, 2000.0, noise, 100 + s, &labels);
    ElevationParams p;
    p.cluster_tolerance = tolerance;
    p.min_cluster_points = 3;
    const GridMap2D geom = GridMap2D::covering(w.extent.min, {5.999, 5.999}, 0.1);
    const GridMap2D map = cloud_to_elevation(cloud, p, geom);
    std::vector<int> ground(geom.rows() * geom.cols(), 0);
    for (std::size_t i = 0; i < cloud.size(); ++i)
      if (labels[i] == kGroundLabel)
        if (auto c = geom.world_to_cell(cloud.points[i].head<2>())) ++ground[c->row * geom.cols() + c->col];
    bool ok = true;
    for (int r = 0; r < geom.rows(); ++r)
      for (int c = 0; c < geom.cols(); ++c) {
        if (ground[r * geom.cols() + c] < p.min_cluster_points) continue;
        ++checked;
        const double e = std::abs(map.at(layers::kElevation, {r, c}));
        worst = std::max(worst, std::isnan(e) ? 1e9 : e);
        if (!(e <= 3.0 * sigma)) ok = false;
      }
    if (ok) ++scenes_ok;
  }
  report("elevation ground recovery within 3 sigma", scenes_ok == scenes,
         std::to_string(scenes_ok) + "/" + std::to_string(scenes) + " scenes, " + std::to_string(checked) +
             " cells, worst " + fmt(worst) + " m, limit " + fmt(3 * sigma));

  int monotone = 0;
  std::string biases;
  for (int s = 0; s < scenes; ++s) {
    ForestWorld w;
    w.extent = {{0, 0}, {6, 6}};
    for (int i = 0; i < 40; ++i) w.clutter.push_back({{pos(rng), pos(rng)}, 0.6, 1.2, 0.0});
    const PointCloud3 cloud = sample_cloud(w, w.extent, 800.0, {0, 0, sigma}, 200 + s);
    const GridMap2D geom = GridMap2D::covering(w.extent.min, {5.999, 5.999}, 0.1);
    double previous = -1e9;
    bool ok = true;
    for (double tol : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8}) {
      ElevationParams p;
      p.cluster_tolerance = tol;
      const auto& e = cloud_to_elevation(cloud, p, geom).layer(layers::kElevation);
      double sum = 0.0;
      int n = 0;
      for (int i = 0; i < e.size(); ++i)
        if (!std::isnan(e.data()[i])) {
          sum += e.data()[i];
          ++n;
        }
      const double bias = sum / n;
      if (bias < previous - 1e-12) ok = false;
      previous = bias;
      if (s == 0) biases += (biases.empty() ? "" : " ") + fmt(bias, 3);
    }
    if (ok) ++monotone;
  }
  report("elevation bias non-decreasing in cluster tolerance under clutter", monotone == scenes,
         std::to_string(monotone) + "/" + std::to_string(scenes) + " scenes, scene 0 bias " + biases);
}

void detection() {
  DetectionBenchConfig c;
  c.patches = 100;
  c.clutter_densities = {0.0, 0.05, 0.1};
  const DetectionBenchReport r = bench_detection(c);
  report(check_detection(r));

  std::mt19937_64 rng(6);
  DetectParams p;
  p.min_points = 300;
  int detections = 0;
  for (int v = 0; v < fixture::kMergedCanopyVariants; ++v)
    detections += static_cast<int>(detect_trees(fixture::merged_canopy(v, rng), p).size());
  report("merged-canopy fixtures give no detections", detections == 0,
         std::to_string(fixture::kMergedCanopyVariants) + " fixtures, " + std::to_string(detections) +
             " detections");
}

void reeds_shepp() {
  constexpr double kRadius = 8.3;
  const oracle::RsOracle o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> far(-25, 25), near(-4, 4), th(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0, worst_curvature = 0.0;
  const int pairs = 10000;
  for (int i = 0; i < pairs; ++i) {
    // A fifth of the pairs are close range, where the cusp-heavy words win.
    auto& xy = i % 5 == 0 ? near : far;
    const Pose2d a(xy(rng), xy(rng), th(rng)), b(xy(rng), xy(rng), th(rng));
    const ReedsSheppPath rs = reeds_shepp_shortest(a, b, kRadius);
    worst = std::max(worst, std::abs(rs.length() - o.distance(a, b, kRadius)));
    const PathSE2 path = discretize(a, rs, 0.1);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const double ds = planar_distance(path.poses()[k], path.poses()[k + 1]);
      if (ds > 1e-9)
        worst_curvature = std::max(
            worst_curvature, std::abs(normalize_angle(path.poses()[k + 1].yaw() - path.poses()[k].yaw())) / ds);
    }
  }
  report("Reeds-Shepp length matches word-family oracle within 1e-6", worst <= 1e-6,
         std::to_string(pairs) + " pairs, worst " + sci(worst));
  report("Reeds-Shepp paths respect turning radius 8.3 m", worst_curvature <= 1.0 / kRadius + 1e-6,
         "max curvature " + fmt(worst_curvature, 6) + ", limit " + fmt(1.0 / kRadius, 6));
}

PlannerBenchConfig planner_config(ScenarioKind kind) {
  PlannerBenchConfig c;
  c.kind = kind;
  c.trials = 10;
  c.worlds_per_density = 3;
  c.max_trial_targets = 2;
  c.plan_budget = 5.0;
  c.plan_iterations = 1000;
  c.probe_budget = 30.0;
  c.probe_iterations = 5000;
  c.timing_columns = false;
  return c;
}

void runtime_bound(const std::string& suite, const PlannerBenchReport& r, double elapsed) {
  double bound = 0.0;
  for (const PlannerBenchRow& row : r.rows)
    bound += row.attempts * r.config.plan_budget + row.n_targets * r.config.probe_budget;
  report(suite + " runtime within trials x targets x budget", elapsed <= bound,
         fmt(elapsed, 1) + " s, bound " + fmt(bound, 0) + " s");
}

void planner() {
  auto t0 = Clock::now();
  const PlannerBenchReport alley = bench_planner(planner_config(ScenarioKind::kAlley));
  const double alley_time = seconds_since(t0);
  report(check_alley(alley));
  runtime_bound("alley suite", alley, alley_time);

  t0 = Clock::now();
  const PlannerBenchReport unstructured = bench_planner(planner_config(ScenarioKind::kUnstructured));
  const double unstructured_time = seconds_since(t0);
  report(check_unstructured(unstructured, &alley));
  runtime_bound("unstructured suite", unstructured, unstructured_time);
}

void tracking() {
  TrackingBenchConfig c;
  c.suite_length = 1000.0;
  c.slips = {0.0, 0.05, 0.1};
  report(check_tracking(bench_tracking(c)));
}

void mission() {
  const int missions = 20;
  int targets = 0, grabbed = 0;
  std::vector<double> detected_errors, blind_errors;
  for (int s = 1; s <= missions; ++s) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::kAlley;
    spec.density = 0.05;
    spec.seed = static_cast<std::uint64_t>(s);
    spec.max_targets = 5;
    const ForestWorld world = generate_forest(spec);
    const std::vector<int> ids = select_targets(world, spec);
    NoiseModel noise;
    noise.pose_sigma_xy = 0.3;
    MissionParams params;
    const GridMap2D occ = mission_occupancy(world, params.resolution);
    for (bool detect : {true, false}) {
      params.detection_enabled = detect;
      const MissionReport rep = run_mission(world, occ, ids, params, noise, static_cast<std::uint64_t>(s));
      for (const TreeOutcome& t : rep.trees) {
        if (!std::isnan(t.gripper_error)) (detect ? detected_errors : blind_errors).push_back(t.gripper_error);
        if (detect && t.outcome == "grabbed" && t.gripper_error < 0.3) ++grabbed;
      }
      if (detect) targets += static_cast<int>(ids.size());
    }
  }
  const double rate = targets ? static_cast<double>(grabbed) / targets : 0.0;
  report("mission grabs >= 80% of trees within 0.3 m", targets == missions * 5 && rate >= 0.8,
         std::to_string(grabbed) + "/" + std::to_string(targets) + " trees, rate " + fmt(rate));
  const double md = median(detected_errors), mb = median(blind_errors);
  report("mission median gripper error below blind grab", md < mb,
         "detection " + fmt(md) + " m (n=" + std::to_string(detected_errors.size()) + "), blind " + fmt(mb) +
             " m (n=" + std::to_string(blind_errors.size()) + ")");
}

void state_machine() {
  // The graph written out independently of the implementation.
  using P = Phase;
  using E = EventKind;
  const std::set<std::tuple<P, E, P>> graph = [] {
    std::set<std::tuple<P, E, P>> g{
        {P::kGetTarget, E::kTargetReady, P::kPlanApproach},
        {P::kGetTarget, E::kQueueEmpty, P::kDone},
        {P::kPlanApproach, E::kPlanSucceeded, P::kDrive},
        {P::kPlanApproach, E::kPlanFailed, P::kGetTarget},
        {P::kDrive, E::kDriveSucceeded, P::kRetractArm},
        {P::kDrive, E::kTrackingFailed, P::kPlanApproach},
        {P::kRetractArm, E::kArmRetracted, P::kScan},
        {P::kScan, E::kScanDone, P::kDetectAndGraspPlan},
        {P::kDetectAndGraspPlan, E::kGraspPlanned, P::kExtendGrab},
        {P::kDetectAndGraspPlan, E::kGraspUnreachable, P::kPlanApproach},
        {P::kExtendGrab, E::kGrabDone, P::kRetractHold},
        {P::kRetractHold, E::kHoldRetracted, P::kGetTarget},
    };
    for (P p : {P::kGetTarget, P::kPlanApproach, P::kDrive, P::kRetractArm, P::kScan, P::kDetectAndGraspPlan,
                P::kExtendGrab, P::kRetractHold})
      g.insert({p, E::kAbort, P::kAborted});
    return g;
  }();

  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> any_event(0, kEventCount - 1), len(1, 80), target(0, 5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int sequences = 10000;
  long accepted = 0, off_graph = 0, inconsistent = 0;
  std::set<std::tuple<P, E, P>> taken;
  for (int run = 0; run < sequences; ++run) {
    MissionStateMachine m({0, 1, 2, 3, 4});
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      // Half the events are drawn from the arcs leaving the current phase so
      // long sequences get deep into the cycle; the rest are arbitrary.
      EventKind kind = static_cast<EventKind>(any_event(rng));
      if (u(rng) < 0.5) {
        std::vector<EventKind> out;
        for (const auto& [from, ev, to] : graph)
          if (from == m.phase() && ev != E::kAbort) out.push_back(ev);
        if (!out.empty()) kind = out[static_cast<std::size_t>(u(rng) * out.size()) % out.size()];
      }
      int t = target(rng);
      if (kind == E::kTargetReady && !m.queue().empty() && u(rng) < 0.8) t = m.queue().front();
      const Phase before = m.phase();
      if (m.handle({kind, t})) {
        ++accepted;
        const auto arc = std::make_tuple(before, kind, m.phase());
        if (!graph.count(arc)) ++off_graph;
        taken.insert(arc);
      } else if (m.phase() != before) {
        ++off_graph;
      }
    }
    if (!log_consistent(m.log())) ++inconsistent;
  }
  const bool fallbacks = taken.count({P::kPlanApproach, E::kPlanFailed, P::kGetTarget}) &&
                         taken.count({P::kDrive, E::kTrackingFailed, P::kPlanApproach});
  report("state machine fuzzing stays on the transition graph", off_graph == 0 && inconsistent == 0 && fallbacks,
         std::to_string(sequences) + " sequences, " + std::to_string(accepted) + " transitions, " +
             std::to_string(off_graph) + " off-graph, " + std::to_string(taken.size()) + "/" +
             std::to_string(graph.size()) + " arcs exercised, fallback arcs " + (fallbacks ? "taken" : "missing"));
}

}  // namespace
}  // namespace harvest

int main() {
  using namespace harvest;
  const std::vector<std::pair<const char*, void (*)()>> sections{
      {"elevation oracle", elevation_oracle}, {"elevation ground", elevation_ground_recovery},
      {"tree detection", detection},          {"reeds-shepp", reeds_shepp},
      {"planner", planner},                   {"tracking", tracking},
      {"mission", mission},                   {"state machine", state_machine},
  };
  for (const auto& [name, fn] : sections) {
    const auto t0 = Clock::now();
    fn();
    std::cout << "# " << name << " took " << fmt(seconds_since(t0), 1) << " s" << std::endl;
  }
  std::cout << "# " << g_failures << " failing criteria" << std::endl;
  return g_failures ? 1 : 0;
}
