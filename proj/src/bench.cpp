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

#include "harvest_nav/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "harvest_nav/seeding.hpp"
#include "harvest_nav/terrain.hpp"

namespace harvest {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::string fmt(double v, int digits = 4) {
  if (!std::isfinite(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i], 3);
  return s;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

double median(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

GridMap2D planning_map(const ForestWorld& world, double res) {
  return to_occupancy(traversability(rasterize_world(world, res)));
}

PathSE2 sub_path(const PathSE2& path, const PathSE2::DirectionRun& run) {
  std::vector<Pose2d> poses(path.poses().begin() + run.first, path.poses().begin() + run.last + 1);
  std::vector<Direction> dirs(poses.size() - 1, run.direction);
  return PathSE2(std::move(poses), std::move(dirs));
}

}  // namespace

ScenarioSpec bench_scenario(const PlannerBenchConfig& config, double density, int world) {
  ScenarioSpec spec;
  spec.kind = config.kind;
  spec.density = density;
  spec.extent_x = spec.extent_y = config.extent;
  spec.max_targets = config.max_targets;
  spec.target_rule = config.kind == ScenarioKind::kAlley ? TargetRule::kAlongAlley : TargetRule::kRandomMax50;
  spec.seed = seed_of(config.seed, world, static_cast<std::uint64_t>(std::llround(density * 1e6)));
  return spec;
}

PlannerBenchReport bench_planner(const PlannerBenchConfig& config) {
  if (config.trials < 0 || config.worlds_per_density < 1)
    throw std::invalid_argument("trials must be >= 0 and worlds_per_density >= 1");
  PlannerBenchReport report;
  report.config = config;
  for (std::size_t di = 0; di < config.densities.size(); ++di) {
    const double density = config.densities[di];
    PlannerBenchRow row;
    row.density = density;
    std::vector<PlannerTrial> trials;
    for (int w = 0; w < config.worlds_per_density; ++w) {
      const ScenarioSpec spec = bench_scenario(config, density, w);
      const ForestWorld world = generate_forest(spec);
      const GridMap2D occ = planning_map(world, config.resolution);
      const Pose2d start = default_start_pose(world);
      const std::vector<int> targets = select_targets(world, spec);
      row.n_trees += static_cast<int>(world.trees.size());
      row.n_targets += static_cast<int>(targets.size());

      std::vector<char> feasible(targets.size(), 0);
      parallel_for(static_cast<int>(targets.size()), config.threads, [&](int i) {
        RRTParams rp = config.rrt;
        rp.rng_seed = seed_of(spec.seed, 0x9b0be, targets[i]);
        rp.max_iterations = config.probe_iterations;
        feasible[i] = feasibility_probe(start, world.trees[targets[i]].position, occ, config.approach, rp,
                                        config.probe_budget);
      });
      std::vector<int> chosen;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!feasible[i]) continue;
        ++row.n_feasible;
        if (config.max_trial_targets <= 0 || static_cast<int>(chosen.size()) < config.max_trial_targets)
          chosen.push_back(targets[i]);
      }

      std::vector<PlannerTrial> local(chosen.size() * static_cast<std::size_t>(config.trials));
      parallel_for(static_cast<int>(local.size()), config.threads, [&](int k) {
        PlannerTrial& t = local[k];
        t.density = density;
        t.world = w;
        t.target = chosen[k / config.trials];
        t.trial = k % config.trials;
        RRTParams rp = config.rrt;
        rp.rng_seed = seed_of(spec.seed, 0x7a1, t.target, t.trial);
        rp.max_time = config.plan_budget;
        rp.max_iterations = config.plan_iterations;
        const PlanOutcome o = plan(start, world.trees[t.target].position, occ, config.approach, rp);
        t.status = o.status;
        t.result = o.result;
        t.result.path = PathSE2();  // keep reports light
      });
      trials.insert(trials.end(), local.begin(), local.end());
    }

    std::vector<double> ta, ti, tt, di_, df, dl, ratio;
    for (const PlannerTrial& t : trials) {
      ++row.attempts;
      if (t.status != PlanStatus::kSuccess) continue;
      ++row.successes;
      ta.push_back(t.result.t_approach);
      ti.push_back(t.result.t_first_solution);
      tt.push_back(t.result.t_total);
      di_.push_back(t.result.length_initial);
      df.push_back(t.result.length_final);
      dl.push_back(t.result.length_lower_bound);
      if (t.result.length_lower_bound > 0) ratio.push_back(t.result.length_final / t.result.length_lower_bound);
    }
    row.success_rate = row.attempts ? static_cast<double>(row.successes) / row.attempts : kNaN;
    row.feasible_fraction = row.n_targets ? static_cast<double>(row.n_feasible) / row.n_targets : kNaN;
    row.t_approach = mean(ta);
    row.t_init = mean(ti);
    row.t_total = mean(tt);
    row.d_init = mean(di_);
    row.d_final = mean(df);
    row.d_lb = mean(dl);
    row.median_ratio = median(ratio);
    report.rows.push_back(row);
    report.trials.insert(report.trials.end(), trials.begin(), trials.end());
  }
  return report;
}

void write_report(std::ostream& out, const PlannerBenchReport& report) {
  const PlannerBenchConfig& c = report.config;
  out << "# bench = " << (c.kind == ScenarioKind::kAlley ? "alley" : "unstructured") << "\n"
      << "# densities = " << join(c.densities) << "\n"
      << "# trials = " << c.trials << "\n"
      << "# worlds_per_density = " << c.worlds_per_density << "\n"
      << "# max_targets = " << c.max_targets << "\n"
      << "# max_trial_targets = " << c.max_trial_targets << "\n"
      << "# seed = " << c.seed << "\n"
      << "# extent = " << fmt(c.extent, 1) << "\n"
      << "# plan_budget = " << fmt(c.plan_budget, 2) << "\n"
      << "# plan_iterations = " << c.plan_iterations << "\n"
      << "# probe_budget = " << fmt(c.probe_budget, 2) << "\n"
      << "# probe_iterations = " << c.probe_iterations << "\n"
      << "# turning_radius = " << fmt(c.rrt.turning_radius, 2) << "\n";
  out << "density,n_trees,n_targets,n_feasible,feasible_fraction,attempts,successes,success_rate";
  if (c.timing_columns) out << ",t_approach,t_init,t_total";
  out << ",d_init,d_final,d_lb,median_ratio\n";
  for (const PlannerBenchRow& r : report.rows) {
    out << fmt(r.density, 3) << ',' << r.n_trees << ',' << r.n_targets << ',' << r.n_feasible << ','
        << fmt(r.feasible_fraction) << ',' << r.attempts << ',' << r.successes << ',' << fmt(r.success_rate);
    if (c.timing_columns) out << ',' << fmt(r.t_approach) << ',' << fmt(r.t_init) << ',' << fmt(r.t_total);
    out << ',' << fmt(r.d_init, 3) << ',' << fmt(r.d_final, 3) << ',' << fmt(r.d_lb, 3) << ','
        << fmt(r.median_ratio) << "\n";
  }
}

PathSE2 reversed(const PathSE2& path) {
  std::vector<Pose2d> poses(path.poses().rbegin(), path.poses().rend());
  std::vector<Direction> dirs;
  for (auto it = path.directions().rbegin(); it != path.directions().rend(); ++it)
    dirs.push_back(*it == Direction::kForward ? Direction::kReverse : Direction::kForward);
  return PathSE2(std::move(poses), std::move(dirs));
}

TrackingSuites tracking_suites(const TrackingBenchConfig& config) {
  TrackingSuites s;
  double straight = 0.0, maneuver = 0.0;
  for (int w = 0; w < config.max_worlds; ++w) {
    if (straight >= config.suite_length && maneuver >= config.suite_length) break;
    ScenarioSpec spec;
    spec.kind = ScenarioKind::kAlley;
    spec.density = config.path_density;
    spec.seed = seed_of(config.seed, 0x7ac4, w);
    const ForestWorld world = generate_forest(spec);
    const GridMap2D occ = planning_map(world, 0.1);
    const Pose2d start = default_start_pose(world);
    for (int target : select_targets(world, spec)) {
      if (straight >= config.suite_length && maneuver >= config.suite_length) break;
      RRTParams rp;
      rp.turning_radius = config.vehicle.min_turn_radius;
      rp.rng_seed = seed_of(spec.seed, target);
      rp.max_iterations = config.plan_iterations;
      rp.max_time = 600.0;
      const PlanOutcome o = plan(start, world.trees[target].position, occ, ApproachParams{}, rp);
      if (!o.ok()) continue;
      const PathSE2& path = o.result.path;
      if (maneuver < config.suite_length && path.cusp_count() >= config.maneuver_min_cusps) {
        s.maneuvering.push_back(path);
        maneuver += path.length();
      }
      if (straight >= config.suite_length) continue;
      for (const auto& run : path.direction_runs()) {
        const PathSE2 sub = sub_path(path, run);
        if (sub.length() < config.min_run_length) continue;
        const PathSE2 flipped = reversed(sub);
        s.forward.push_back(run.direction == Direction::kForward ? sub : flipped);
        s.reverse.push_back(run.direction == Direction::kForward ? flipped : sub);
        straight += sub.length();
      }
    }
  }
  return s;
}

TrackingBenchReport bench_tracking(const TrackingBenchConfig& config) {
  TrackingBenchReport report;
  report.config = config;
  const TrackingSuites suites = tracking_suites(config);
  const std::pair<const char*, const std::vector<PathSE2>*> named[] = {
      {"forward", &suites.forward}, {"reverse", &suites.reverse}, {"maneuvering", &suites.maneuvering}};
  for (double slip : config.slips) {
    for (const auto& [name, paths] : named) {
      TrackingBenchRow row;
      row.suite = name;
      row.slip = slip;
      double err_sum = 0.0;
      long samples = 0;
      for (const PathSE2& p : *paths) {
        TrackingConfig tc;
        tc.dt = config.dt;
        tc.slip = slip;
        const TrackingResult r = simulate_tracking(p, config.vehicle, config.tracker, tc);
        ++row.paths;
        row.completed += r.completed;
        const long n = static_cast<long>(r.trajectory.size()) - 1;
        err_sum += r.mean_cross_track * static_cast<double>(n);
        samples += n;
        row.max_track_error = std::max(row.max_track_error, r.max_cross_track);
        row.length_forward += r.length_forward;
        row.length_reverse += r.length_reverse;
        row.cusps += r.cusps;
        row.traveled_total += r.distance_traveled;
      }
      row.mean_track_error = samples ? err_sum / static_cast<double>(samples) : kNaN;
      row.cusps = row.paths ? row.cusps / row.paths : kNaN;
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_report(std::ostream& out, const TrackingBenchReport& report) {
  const TrackingBenchConfig& c = report.config;
  out << "# bench = track\n"
      << "# suite_length = " << fmt(c.suite_length, 1) << "\n"
      << "# path_density = " << fmt(c.path_density, 3) << "\n"
      << "# seed = " << c.seed << "\n"
      << "# plan_iterations = " << c.plan_iterations << "\n"
      << "# slips = " << join(c.slips) << "\n"
      << "# lookahead = " << fmt(c.tracker.lookahead, 2) << "\n"
      << "# speed = " << fmt(c.tracker.speed, 2) << "\n"
      << "# dt = " << fmt(c.dt, 3) << "\n";
  out << "suite,slip,paths,completed,avg_track_error,max_track_error,length_fwd,length_bck,cusps,traveled_total\n";
  for (const TrackingBenchRow& r : report.rows)
    out << r.suite << ',' << fmt(r.slip, 3) << ',' << r.paths << ',' << r.completed << ','
        << fmt(r.mean_track_error) << ',' << fmt(r.max_track_error) << ',' << fmt(r.length_forward, 2) << ','
        << fmt(r.length_reverse, 2) << ',' << fmt(r.cusps, 2) << ',' << fmt(r.traveled_total, 2) << "\n";
}

PatchScore score_patch(const ForestWorld& world, const Rect& patch, const DetectionBenchConfig& config,
                       std::uint64_t seed) {
  const ScenarioSpec defaults;
  DetectParams params = config.detect;
  params.min_points =
      scaled_min_points(config.point_density, defaults.radius_min, params, config.min_points_fraction);
  std::vector<int> labels;
  const PointCloud3 cloud = sample_cloud(world, patch, config.point_density, {0.0, 0.0, config.point_sigma},
                                         seed, &labels);
  PointCloud3 cropped;
  std::vector<int> counts(world.trees.size(), 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d& q = cloud.points[i];
    const double h = q.z() - world.ground.elevation(q.x(), q.y());
    if (h < params.crop_z_min || h > params.crop_z_max) continue;
    cropped.push_back(q);
    if (labels[i] >= 0) ++counts[labels[i]];
  }
  PatchScore score;
  std::vector<char> truth(world.trees.size(), 0);
  for (std::size_t t = 0; t < world.trees.size(); ++t)
    if (patch.contains(world.trees[t].position) && counts[t] >= params.min_points) {
      truth[t] = 1;
      ++score.trees;
    }
  const auto det = detect_trees(cropped, params);
  score.detections = static_cast<int>(det.size());

  struct Pair {
    double d;
    int det, tree;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < static_cast<int>(det.size()); ++i)
    for (int t = 0; t < static_cast<int>(world.trees.size()); ++t) {
      const double d = (world.trees[t].position - det[i].center.head<2>()).norm();
      if (d <= config.match_radius) pairs.push_back({d, i, t});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return a.d < b.d || (a.d == b.d && (a.det < b.det || (a.det == b.det && a.tree < b.tree)));
  });
  std::vector<char> det_used(det.size(), 0), tree_used(world.trees.size(), 0);
  for (const Pair& p : pairs) {
    if (det_used[p.det] || tree_used[p.tree]) continue;
    det_used[p.det] = tree_used[p.tree] = 1;
    score.true_positives += truth[p.tree];
  }
  for (char u : det_used) score.false_positives += !u;
  return score;
}

DetectionBenchReport bench_detection(const DetectionBenchConfig& config) {
  if (config.patches < 0 || !(config.patch_size > 0)) throw std::invalid_argument("invalid patch settings");
  DetectionBenchReport report;
  report.config = config;
  constexpr int kPatchesPerWorld = 25;
  for (double clutter : config.clutter_densities) {
    DetectionBenchRow row;
    row.clutter_density = clutter;
    std::vector<double> prec, rec;
    int fp = 0;
    ForestWorld world;
    for (int p = 0; p < config.patches; ++p) {
      if (p % kPatchesPerWorld == 0) {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::kUnstructured;
        spec.density = config.tree_density;
        spec.clutter_density = clutter;
        spec.seed = seed_of(config.seed, 0xde7, p / kPatchesPerWorld);
        world = generate_forest(spec);
      }
      auto rng = make_rng(seed_of(config.seed, 0x9a7c, p));
      std::uniform_real_distribution<double> ux(world.extent.min.x(), world.extent.max.x() - config.patch_size);
      std::uniform_real_distribution<double> uy(world.extent.min.y(), world.extent.max.y() - config.patch_size);
      const Eigen::Vector2d lo(ux(rng), uy(rng));
      const Rect patch{lo, lo + Eigen::Vector2d::Constant(config.patch_size)};
      const PatchScore s = score_patch(world, patch, config, seed_of(config.seed, 0xc10d, p));
      ++row.patches;
      row.trees += s.trees;
      row.detections += s.detections;
      row.true_positives += s.true_positives;
      fp += s.false_positives;
      if (s.true_positives + s.false_positives > 0)
        prec.push_back(static_cast<double>(s.true_positives) / (s.true_positives + s.false_positives));
      if (s.trees > 0) rec.push_back(static_cast<double>(s.true_positives) / s.trees);
    }
    row.precision = row.true_positives + fp > 0 ? static_cast<double>(row.true_positives) / (row.true_positives + fp)
                                                 : kNaN;
    row.recall = row.trees > 0 ? static_cast<double>(row.true_positives) / row.trees : kNaN;
    row.precision_mean = mean(prec);
    row.precision_std = stddev(prec);
    row.recall_mean = mean(rec);
    row.recall_std = stddev(rec);
    report.rows.push_back(row);
  }
  return report;
}

void write_report(std::ostream& out, const DetectionBenchReport& report) {
  const DetectionBenchConfig& c = report.config;
  out << "# bench = detect\n"
      << "# patches = " << c.patches << "\n"
      << "# patch_size = " << fmt(c.patch_size, 2) << "\n"
      << "# tree_density = " << fmt(c.tree_density, 3) << "\n"
      << "# clutter_densities = " << join(c.clutter_densities) << "\n"
      << "# point_density = " << fmt(c.point_density, 1) << "\n"
      << "# point_sigma = " << fmt(c.point_sigma, 3) << "\n"
      << "# match_radius = " << fmt(c.match_radius, 2) << "\n"
      << "# seed = " << c.seed << "\n";
  out << "clutter_density,patches,trees,detections,true_positives,precision,recall,precision_mean,precision_std,"
         "recall_mean,recall_std\n";
  for (const DetectionBenchRow& r : report.rows)
    out << fmt(r.clutter_density, 3) << ',' << r.patches << ',' << r.trees << ',' << r.detections << ','
        << r.true_positives << ',' << fmt(r.precision) << ',' << fmt(r.recall) << ',' << fmt(r.precision_mean)
        << ',' << fmt(r.precision_std) << ',' << fmt(r.recall_mean) << ',' << fmt(r.recall_std) << "\n";
}

double rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rank_correlation: size mismatch");
  const std::size_t n = a.size();
  if (n < 2) return kNaN;
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double ma = mean(ra), mb = mean(rb);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0 || sbb == 0) return kNaN;
  return sab / std::sqrt(saa * sbb);
}

namespace {

BenchCheck make_check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

const PlannerBenchRow* row_at(const PlannerBenchReport& r, double density) {
  for (const PlannerBenchRow& row : r.rows)
    if (std::abs(row.density - density) < 1e-9) return &row;
  return nullptr;
}

}  // namespace

std::vector<BenchCheck> check_alley(const PlannerBenchReport& report) {
  std::vector<BenchCheck> out;
  for (const PlannerBenchRow& row : report.rows) {
    if (row.density > 0.15 + 1e-9) continue;
    const bool ok = row.attempts > 0 && row.success_rate >= 0.90;
    out.push_back(make_check("alley success density " + fmt(row.density), ok,
                             "success_rate=" + fmt(row.success_rate) + " attempts=" + std::to_string(row.attempts)));
  }
  std::vector<double> ratio;
  for (const PlannerTrial& t : report.trials)
    if (t.status == PlanStatus::kSuccess && t.result.length_lower_bound > 0)
      ratio.push_back(t.result.length_final / t.result.length_lower_bound);
  const double m = median(ratio);
  out.push_back(make_check("alley median d_final/d_lb", !ratio.empty() && m <= 1.2,
                           "median=" + fmt(m) + " n=" + std::to_string(ratio.size())));
  std::vector<double> d, f;
  for (const PlannerBenchRow& row : report.rows) {
    if (std::isnan(row.feasible_fraction)) continue;
    d.push_back(row.density);
    f.push_back(row.feasible_fraction);
  }
  const double rho = rank_correlation(d, f);
  out.push_back(make_check("alley feasible fraction falls with density", rho < 0.0, "spearman=" + fmt(rho)));
  return out;
}

std::vector<BenchCheck> check_unstructured(const PlannerBenchReport& report, const PlannerBenchReport* alley) {
  std::vector<BenchCheck> out;
  if (report.rows.size() >= 3) {
    double lowest_mid = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < report.rows.size(); ++i)
      if (!std::isnan(report.rows[i].success_rate)) lowest_mid = std::min(lowest_mid, report.rows[i].success_rate);
    const double last = report.rows.back().success_rate;
    out.push_back(make_check("unstructured success recovers at highest density",
                             !std::isnan(last) && last >= lowest_mid,
                             "highest=" + fmt(last) + " lowest_mid=" + fmt(lowest_mid)));
  } else {
    out.push_back(make_check("unstructured success recovers at highest density", false, "needs >= 3 densities"));
  }
  if (alley) {
    const PlannerBenchRow* u = row_at(report, 0.3);
    const PlannerBenchRow* a = row_at(*alley, 0.3);
    const bool ok = u && a && a->feasible_fraction > 0 && u->feasible_fraction <= 0.25 * a->feasible_fraction;
    out.push_back(make_check("unstructured feasible fraction at 0.3 <= 25% of alley", ok,
                             "unstructured=" + fmt(u ? u->feasible_fraction : kNaN) +
                                 " alley=" + fmt(a ? a->feasible_fraction : kNaN)));
  }
  return out;
}

std::vector<BenchCheck> check_tracking(const TrackingBenchReport& report) {
  std::vector<BenchCheck> out;
  for (const TrackingBenchRow& row : report.rows) {
    if (row.slip != 0.0) continue;
    const double limit = row.suite == "maneuvering" ? 0.15 : 0.10;
    out.push_back(make_check(row.suite + " traveled >= " + fmt(report.config.suite_length, 0) + " m",
                             row.traveled_total >= report.config.suite_length,
                             "traveled=" + fmt(row.traveled_total, 1)));
    out.push_back(make_check(row.suite + " mean error <= " + fmt(limit, 2),
                             row.completed == row.paths && row.mean_track_error <= limit,
                             "mean=" + fmt(row.mean_track_error) + " completed=" + std::to_string(row.completed) +
                                 "/" + std::to_string(row.paths)));
    if (row.suite == "maneuvering")
      out.push_back(make_check("maneuvering cusps per path >= 2", row.cusps >= 2.0, "cusps=" + fmt(row.cusps)));
  }
  for (const char* suite : {"forward", "reverse", "maneuvering"}) {
    std::vector<std::pair<double, double>> by_slip;
    for (const TrackingBenchRow& row : report.rows)
      if (row.suite == suite) by_slip.emplace_back(row.slip, row.mean_track_error);
    if (by_slip.size() < 2) continue;
    std::sort(by_slip.begin(), by_slip.end());
    bool mono = true;
    std::string detail;
    for (std::size_t i = 0; i < by_slip.size(); ++i) {
      if (i && by_slip[i].second < by_slip[i - 1].second) mono = false;
      detail += (i ? " " : "") + fmt(by_slip[i].first) + ":" + fmt(by_slip[i].second);
    }
    out.push_back(make_check(std::string(suite) + " error non-decreasing in slip", mono, detail));
  }
  return out;
}

std::vector<BenchCheck> check_detection(const DetectionBenchReport& report) {
  std::vector<BenchCheck> out;
  const DetectionBenchRow* clean = nullptr;
  for (const DetectionBenchRow& row : report.rows)
    if (row.clutter_density == 0.0) clean = &row;
  if (!clean) {
    out.push_back(make_check("detection clutter-free row present", false, "no clutter_density 0 row"));
    return out;
  }
  out.push_back(make_check("detection patches >= 90", clean->patches >= 90, "patches=" + std::to_string(clean->patches)));
  out.push_back(make_check("detection recall >= 0.85", clean->recall >= 0.85, "recall=" + fmt(clean->recall)));
  out.push_back(make_check("detection precision >= 0.90", clean->precision >= 0.90,
                           "precision=" + fmt(clean->precision)));
  if (report.rows.size() >= 2) {
    const DetectionBenchRow& heavy = *std::max_element(
        report.rows.begin(), report.rows.end(),
        [](const DetectionBenchRow& a, const DetectionBenchRow& b) { return a.clutter_density < b.clutter_density; });
    out.push_back(make_check("detection recall does not improve under clutter", heavy.recall <= clean->recall,
                             "clutter " + fmt(heavy.clutter_density) + " recall=" + fmt(heavy.recall)));
  }
  return out;
}

}  // namespace harvest
