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

// harvest-nav: command-line front end and benchmark harness.
//
// Exit codes: 0 success, 1 run-time failure (plan not found, tracking
// incomplete), 2 invalid input, 3 benchmark assertion failure.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "harvest_nav/bench.hpp"
#include "harvest_nav/config.hpp"
#include "harvest_nav/forest_sim.hpp"
#include "harvest_nav/map_io.hpp"
#include "harvest_nav/mission.hpp"
#include "harvest_nav/nav_control.hpp"
#include "harvest_nav/planner.hpp"
#include "harvest_nav/seeding.hpp"
#include "harvest_nav/service.hpp"
#include "harvest_nav/terrain.hpp"
#include "harvest_nav/tree_detection.hpp"

// After Eigen: resolv.h, pulled in by httplib, defines a `_res` macro.
#include "CLI11.hpp"
#include "httplib.h"

namespace fs = std::filesystem;
using namespace harvest;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;
constexpr int kAssertion = 3;

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out = ".";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--config", c.config, "key = value config file");
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
}

fs::path out_file(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  return fs::path(c.out) / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw InvalidInput("cannot write " + p.string());
  return out;
}

KeyValues config_kv(const Common& c) { return c.config.empty() ? KeyValues{} : load_key_values(c.config); }

std::vector<double> parse_list(const std::string& s, std::size_t n, const std::string& what) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) v.push_back(parse_double(item));
  if (v.size() != n) throw InvalidInput(what + " needs " + std::to_string(n) + " comma-separated numbers");
  return v;
}

std::vector<int> parse_ids(const std::string& s) {
  std::vector<int> ids;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    ids.push_back(std::stoi(item, &used));
    if (used != item.size()) throw InvalidInput("bad id '" + item + "'");
  }
  return ids;
}

ForestWorld load_world_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open world '" + path + "'");
  return read_world(in);
}

int report_checks(const std::vector<BenchCheck>& checks) {
  bool ok = true;
  for (const BenchCheck& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    ok = ok && c.passed;
  }
  return ok ? kOk : kAssertion;
}

// ---- subcommands ----

struct GenArgs {
  Common common;
  double cloud_density = 0.0;
  double point_sigma = 0.01;
};

int run_gen(const GenArgs& a) {
  ScenarioSpec spec = a.common.config.empty() ? ScenarioSpec{} : load_scenario(a.common.config);
  if (a.common.seed) spec.seed = *a.common.seed;
  const ForestWorld world = generate_forest(spec);
  {
    auto out = open_out(out_file(a.common, "scenario.txt"));
    write_scenario(out, spec);
  }
  {
    auto out = open_out(out_file(a.common, "world.txt"));
    write_world(out, world);
  }
  {
    auto out = open_out(out_file(a.common, "targets.txt"));
    out << "# id x y\n";
    for (int id : select_targets(world, spec))
      out << id << ' ' << format_double(world.trees[id].position.x()) << ' '
          << format_double(world.trees[id].position.y()) << '\n';
  }
  if (a.cloud_density > 0.0) {
    NoiseModel noise;
    noise.point_sigma = a.point_sigma;
    save_point_cloud(out_file(a.common, "cloud.xyz"),
                     sample_cloud(world, world.extent, a.cloud_density, noise, seed_of(spec.seed, 0xc10d)));
  }
  std::cout << "trees " << world.trees.size() << " clutter " << world.clutter.size() << "\n";
  return kOk;
}

struct TerrainArgs {
  Common common;
  std::string input;
  ElevationParams elev;
  double threshold = 0.5;
};

int run_terrain_convert(const TerrainArgs& a) {
  const GridMap2D map = cloud_to_elevation(load_point_cloud(a.input), a.elev);
  save_grid_map(out_file(a.common, "elevation.map"), map);
  std::cout << "elevation " << map.rows() << " x " << map.cols() << "\n";
  return kOk;
}

int run_terrain_trav(const TerrainArgs& a) {
  const GridMap2D elev = load_grid_map(a.input);
  if (!elev.has_layer(layers::kElevation)) throw InvalidInput("map has no elevation layer");
  const GridMap2D map = to_occupancy(traversability(elev), a.threshold);
  save_grid_map(out_file(a.common, "traversability.map"), map);
  int blocked = 0;
  const auto& occ = map.layer(layers::kOccupancy);
  for (int r = 0; r < map.rows(); ++r)
    for (int c = 0; c < map.cols(); ++c) blocked += occ(r, c) >= 0.5;
  std::cout << "occupied cells " << blocked << " of " << map.rows() * map.cols() << "\n";
  return kOk;
}

struct DetectArgs {
  Common common;
  std::string cloud;
  std::string expected;
  DetectParams params;
};

int run_trees_detect(const DetectArgs& a) {
  DetectParams p = a.params;
  require_consumed(apply_config(config_kv(a.common), p));
  const auto detections = detect_trees(load_point_cloud(a.cloud), p);
  auto out = open_out(out_file(a.common, "trees.txt"));
  out << "# x y z a_x a_y a_z alignment points\n";
  for (const TreeDetection& d : detections)
    out << format_double(d.center.x()) << ' ' << format_double(d.center.y()) << ' ' << format_double(d.center.z())
        << ' ' << format_double(d.ellipsoid_semiaxes.x()) << ' ' << format_double(d.ellipsoid_semiaxes.y()) << ' '
        << format_double(d.ellipsoid_semiaxes.z()) << ' ' << format_double(d.alignment) << ' ' << d.point_count
        << '\n';
  std::cout << "detections " << detections.size() << "\n";
  if (!a.expected.empty()) {
    const auto e = parse_list(a.expected, 2, "--expected");
    if (const auto pick = pick_target(detections, {e[0], e[1]}))
      std::cout << "target " << format_double(pick->center.x()) << ' ' << format_double(pick->center.y()) << "\n";
    else
      std::cout << "target none\n";
  }
  return kOk;
}

struct PlanArgs {
  Common common;
  std::string world;
  std::string map;
  int target = -1;
  std::string target_xy;
  std::string start;
  int iterations = 1500;
  double budget = 600.0;
  double resolution = 0.1;
};

int run_plan(const PlanArgs& a) {
  std::optional<ForestWorld> world;
  if (!a.world.empty()) world = load_world_file(a.world);
  GridMap2D occ;
  if (!a.map.empty()) {
    occ = load_grid_map(a.map);
    if (!occ.has_layer(layers::kOccupancy)) throw InvalidInput("map has no occupancy layer");
  } else if (world) {
    occ = mission_occupancy(*world, a.resolution);
  } else {
    throw InvalidInput("plan needs --world or --map");
  }
  Eigen::Vector2d target;
  if (a.target >= 0) {
    if (!world || a.target >= static_cast<int>(world->trees.size())) throw InvalidInput("unknown --target id");
    target = world->trees[a.target].position;
  } else if (!a.target_xy.empty()) {
    const auto v = parse_list(a.target_xy, 2, "--target-xy");
    target = {v[0], v[1]};
  } else {
    throw InvalidInput("plan needs --target or --target-xy");
  }
  Pose2d start;
  if (!a.start.empty()) {
    const auto v = parse_list(a.start, 3, "--start");
    start = Pose2d(v[0], v[1], v[2]);
  } else if (world) {
    start = default_start_pose(*world);
  } else {
    throw InvalidInput("plan needs --start without --world");
  }
  ApproachParams ap;
  RRTParams rp;
  rp.rng_seed = a.common.seed.value_or(1);
  rp.max_iterations = a.iterations;
  rp.max_time = a.budget;
  const PlanOutcome o = plan(start, target, occ, ap, rp);
  auto out = open_out(out_file(a.common, "plan.txt"));
  const PlanResult& r = o.result;
  out << "status = " << (o.ok() ? "success" : o.error()) << "\n"
      << "t_approach = " << format_double(r.t_approach) << "\n"
      << "t_init = " << format_double(r.t_first_solution) << "\n"
      << "t_total = " << format_double(r.t_total) << "\n"
      << "d_init = " << format_double(r.length_initial) << "\n"
      << "d_final = " << format_double(r.length_final) << "\n"
      << "d_lb = " << format_double(r.length_lower_bound) << "\n"
      << "iterations = " << r.iterations << "\n"
      << "candidates = " << r.candidate_count << "\n";
  if (!o.ok()) {
    std::cerr << "error: " << o.error() << "\n";
    return kFailed;
  }
  out << "approach_pose = " << format_double(r.approach_pose.x()) << ' ' << format_double(r.approach_pose.y()) << ' '
      << format_double(r.approach_pose.yaw()) << "\n"
      << "cusps = " << r.path.cusp_count() << "\n";
  save_path(out_file(a.common, "path.txt"), r.path);
  std::cout << "path length " << format_double(r.path.length()) << " cusps " << r.path.cusp_count() << "\n";
  return kOk;
}

struct TrackArgs {
  Common common;
  std::string path;
  std::string start;
  double slip = 0.0;
  double dt = 0.05;
};

int run_track(const TrackArgs& a) {
  const PathSE2 path = load_path(a.path);
  if (path.empty()) throw InvalidInput("empty path");
  TrackerParams tp;
  VehicleModel vm;
  TrackingBenchConfig tmp;
  require_consumed(apply_config(config_kv(a.common), tmp));
  tp = tmp.tracker;
  vm = tmp.vehicle;
  TrackingConfig tc;
  tc.dt = a.dt;
  tc.slip = a.slip;
  if (!a.start.empty()) {
    const auto v = parse_list(a.start, 3, "--start");
    tc.start = Pose2d(v[0], v[1], v[2]);
  }
  const TrackingResult r = simulate_tracking(path, vm, tp, tc);
  auto out = open_out(out_file(a.common, "trajectory.txt"));
  out << "# t x y yaw e_ct\n";
  for (const TrajectorySample& s : r.trajectory)
    out << format_double(s.t) << ' ' << format_double(s.pose.x()) << ' ' << format_double(s.pose.y()) << ' '
        << format_double(s.pose.yaw()) << ' ' << format_double(s.cross_track) << '\n';
  out << "# completed = " << r.completed << "\n"
      << "# stalled = " << r.stalled << "\n"
      << "# avg_track_error = " << format_double(r.mean_cross_track) << "\n"
      << "# max_track_error = " << format_double(r.max_cross_track) << "\n"
      << "# length_fwd = " << format_double(r.length_forward) << "\n"
      << "# length_bck = " << format_double(r.length_reverse) << "\n"
      << "# cusps = " << r.cusps << "\n"
      << "# traveled_total = " << format_double(r.distance_traveled) << "\n"
      << "# duration = " << format_double(r.duration) << "\n";
  std::cout << "avg_track_error " << format_double(r.mean_cross_track) << " completed " << r.completed << "\n";
  return r.completed ? kOk : kFailed;
}

struct MissionArgs {
  Common common;
  std::string world;
  std::string targets;
  bool no_detection = false;
};

int run_mission_cmd(const MissionArgs& a) {
  MissionParams params;
  NoiseModel noise;
  KeyValues rest = apply_config(apply_config(config_kv(a.common), params), noise);
  ScenarioSpec spec = scenario_from(rest);
  if (a.no_detection) params.detection_enabled = false;
  const ForestWorld world = a.world.empty() ? generate_forest(spec) : load_world_file(a.world);
  std::vector<int> targets = a.targets.empty() ? select_targets(world, spec) : parse_ids(a.targets);
  for (int t : targets)
    if (t < 0 || t >= static_cast<int>(world.trees.size())) throw InvalidInput("unknown target " + std::to_string(t));
  auto events = open_out(out_file(a.common, "events.jsonl"));
  std::uint64_t seq = 0;
  MissionRunner runner(world, targets, params, noise, a.common.seed.value_or(1),
                       [&](const std::string& type, const std::string& payload) {
                         events << SessionEvent{++seq, type, payload}.line() << "\n";
                       });
  while (runner.step()) {
  }
  const MissionReport report = runner.report();
  auto out = open_out(out_file(a.common, "report.jsonl"));
  write_report_jsonl(out, report);
  std::cout << "grabbed " << report.grabbed << " of " << targets.size() << " phase " << to_string(report.final_phase)
            << "\n";
  return kOk;
}

struct BenchArgs {
  Common common;
  int threads = 1;
  bool no_check = false;
};

int run_bench_planner(const BenchArgs& a, ScenarioKind kind) {
  PlannerBenchConfig c;
  c.kind = kind;
  require_consumed(apply_config(config_kv(a.common), c));
  if (a.common.seed) c.seed = *a.common.seed;
  c.threads = a.threads;
  const PlannerBenchReport r = bench_planner(c);
  const std::string name = kind == ScenarioKind::kAlley ? "alley" : "unstructured";
  auto out = open_out(out_file(a.common, "bench_" + name + ".csv"));
  write_report(out, r);
  if (a.no_check) return kOk;
  return report_checks(kind == ScenarioKind::kAlley ? check_alley(r) : check_unstructured(r));
}

int run_bench_detect(const BenchArgs& a) {
  DetectionBenchConfig c;
  require_consumed(apply_config(config_kv(a.common), c));
  if (a.common.seed) c.seed = *a.common.seed;
  const DetectionBenchReport r = bench_detection(c);
  auto out = open_out(out_file(a.common, "bench_detect.csv"));
  write_report(out, r);
  return a.no_check ? kOk : report_checks(check_detection(r));
}

int run_bench_track(const BenchArgs& a) {
  TrackingBenchConfig c;
  require_consumed(apply_config(config_kv(a.common), c));
  if (a.common.seed) c.seed = *a.common.seed;
  const TrackingBenchReport r = bench_tracking(c);
  auto out = open_out(out_file(a.common, "bench_track.csv"));
  write_report(out, r);
  return a.no_check ? kOk : report_checks(check_tracking(r));
}

httplib::Server* g_server = nullptr;

int run_serve(const std::string& listen) {
  const auto [host, port] = listen_address(listen);
  MissionService service;
  httplib::Server server;
  register_routes(server, service);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  if (!server.bind_to_port(host, port)) throw InvalidInput("cannot listen on " + host + ":" + std::to_string(port));
  std::cout << kApiVersion << " listening on " << host << ":" << port << std::endl;
  server.listen_after_bind();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forest harvester navigation: scenarios, mapping, planning, tracking, missions, benchmarks"};
  app.require_subcommand(1);
  int code = kOk;

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a scenario world (and optionally a point cloud)");
  add_common(gen_cmd, gen.common);
  gen_cmd->add_option("--cloud-density", gen.cloud_density, "Sample a cloud at this density (points/m^2)");
  gen_cmd->add_option("--point-sigma", gen.point_sigma, "Cloud noise sigma");
  gen_cmd->callback([&] { code = run_gen(gen); });

  auto* terrain = app.add_subcommand("terrain", "Elevation and traversability maps");
  terrain->require_subcommand(1);
  TerrainArgs conv, trav;
  auto* conv_cmd = terrain->add_subcommand("convert", "Point cloud to elevation map");
  add_common(conv_cmd, conv.common);
  conv_cmd->add_option("--cloud", conv.input, "Point cloud file (x y z)")->required();
  conv_cmd->add_option("--resolution", conv.elev.resolution)->capture_default_str();
  conv_cmd->add_option("--cluster-tolerance", conv.elev.cluster_tolerance)->capture_default_str();
  conv_cmd->add_option("--min-cluster-points", conv.elev.min_cluster_points)->capture_default_str();
  conv_cmd->callback([&] { code = run_terrain_convert(conv); });
  auto* trav_cmd = terrain->add_subcommand("trav", "Elevation map to traversability and occupancy");
  add_common(trav_cmd, trav.common);
  trav_cmd->add_option("--map", trav.input, "Elevation grid map")->required();
  trav_cmd->add_option("--threshold", trav.threshold)->capture_default_str();
  trav_cmd->callback([&] { code = run_terrain_trav(trav); });

  auto* trees = app.add_subcommand("trees", "Tree detection");
  trees->require_subcommand(1);
  DetectArgs det;
  auto* det_cmd = trees->add_subcommand("detect", "Detect trunks in a point cloud");
  add_common(det_cmd, det.common);
  det_cmd->add_option("--cloud", det.cloud)->required();
  det_cmd->add_option("--expected", det.expected, "x,y of the expected tree");
  det_cmd->add_option("--min-points", det.params.min_points)->capture_default_str();
  det_cmd->callback([&] { code = run_trees_detect(det); });

  PlanArgs pl;
  auto* plan_cmd = app.add_subcommand("plan", "Plan an approach path to a tree");
  add_common(plan_cmd, pl.common);
  plan_cmd->add_option("--world", pl.world, "World file");
  plan_cmd->add_option("--map", pl.map, "Grid map with an occupancy layer");
  plan_cmd->add_option("--target", pl.target, "Tree id in the world");
  plan_cmd->add_option("--target-xy", pl.target_xy, "x,y of the tree");
  plan_cmd->add_option("--start", pl.start, "x,y,yaw");
  plan_cmd->add_option("--iterations", pl.iterations, "Iteration cap (0 = time budget only)")->capture_default_str();
  plan_cmd->add_option("--budget", pl.budget, "Time budget [s]")->capture_default_str();
  plan_cmd->callback([&] { code = run_plan(pl); });

  TrackArgs tr;
  auto* track_cmd = app.add_subcommand("track", "Simulate path tracking");
  add_common(track_cmd, tr.common);
  track_cmd->add_option("--path", tr.path, "Path file (x y yaw d)")->required();
  track_cmd->add_option("--start", tr.start, "x,y,yaw");
  track_cmd->add_option("--slip", tr.slip, "Lateral slip speed [m/s]")->capture_default_str();
  track_cmd->add_option("--dt", tr.dt)->capture_default_str();
  track_cmd->callback([&] { code = run_track(tr); });

  auto* mission = app.add_subcommand("mission", "Mission execution");
  mission->require_subcommand(1);
  MissionArgs mi;
  auto* run_cmd = mission->add_subcommand("run", "Run a simulated harvesting mission");
  add_common(run_cmd, mi.common);
  run_cmd->add_option("--world", mi.world, "World file (default: generate from the config scenario keys)");
  run_cmd->add_option("--targets", mi.targets, "Comma-separated tree ids in harvesting order");
  run_cmd->add_flag("--no-detection", mi.no_detection, "Blind grab at the map position");
  run_cmd->callback([&] { code = run_mission_cmd(mi); });

  auto* bench = app.add_subcommand("bench", "Benchmark suites");
  bench->require_subcommand(1);
  BenchArgs ba, bu, bd, bt;
  const auto bench_cmd = [&](const char* name, const char* desc, BenchArgs& args) {
    auto* c = bench->add_subcommand(name, desc);
    add_common(c, args.common);
    c->add_option("--threads", args.threads)->capture_default_str();
    c->add_flag("--no-check", args.no_check, "Skip the assertions");
    return c;
  };
  bench_cmd("alley", "Planner suite in forest-alley worlds", ba)->callback([&] {
    code = run_bench_planner(ba, ScenarioKind::kAlley);
  });
  bench_cmd("unstructured", "Planner suite in unstructured worlds", bu)->callback([&] {
    code = run_bench_planner(bu, ScenarioKind::kUnstructured);
  });
  bench_cmd("detect", "Tree detection patch suite", bd)->callback([&] { code = run_bench_detect(bd); });
  bench_cmd("track", "Path tracking suites", bt)->callback([&] { code = run_bench_track(bt); });

  std::string listen;
  auto* serve_cmd = app.add_subcommand("serve", "Start the mission service");
  serve_cmd->add_option("--listen", listen, std::string("host:port (else $") + kListenEnv + ", else 127.0.0.1:8750)");
  serve_cmd->callback([&] { code = run_serve(listen); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ForestGenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return code;
}
