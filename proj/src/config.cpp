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

#include "harvest_nav/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace harvest {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

template <typename Int>
Int to_int(const std::string& s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::vector<double> to_reals(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_real(item));
  }
  return out;
}

class Binder {
 public:
  Binder& real(const std::string& key, double* v) {
    set_[key] = [v](const std::string& s) { *v = to_real(s); };
    return *this;
  }
  Binder& integer(const std::string& key, int* v) {
    set_[key] = [v](const std::string& s) { *v = to_int<int>(s); };
    return *this;
  }
  Binder& seed(const std::string& key, std::uint64_t* v) {
    set_[key] = [v](const std::string& s) { *v = to_int<std::uint64_t>(s); };
    return *this;
  }
  Binder& boolean(const std::string& key, bool* v) {
    set_[key] = [v](const std::string& s) { *v = to_bool(s); };
    return *this;
  }
  Binder& reals(const std::string& key, std::vector<double>* v) {
    set_[key] = [v](const std::string& s) { *v = to_reals(s); };
    return *this;
  }
  Binder& custom(const std::string& key, std::function<void(const std::string&)> f) {
    set_[key] = std::move(f);
    return *this;
  }

  KeyValues run(const KeyValues& kv) const {
    KeyValues rest;
    for (const auto& [k, v] : kv) {
      const auto it = set_.find(k);
      if (it == set_.end()) {
        rest.emplace_back(k, v);
        continue;
      }
      try {
        it->second(v);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(k + ": " + e.what());
      }
    }
    return rest;
  }

 private:
  std::map<std::string, std::function<void(const std::string&)>> set_;
};

void bind_rrt(Binder& b, RRTParams& rrt) {
  b.real("goal_bias", &rrt.goal_bias)
      .real("neighbor_radius_const", &rrt.neighbor_radius_const)
      .real("max_extension", &rrt.max_extension)
      .real("turning_radius", &rrt.turning_radius);
}

void bind_tracker(Binder& b, TrackerParams& t, VehicleModel& v) {
  b.real("lookahead", &t.lookahead)
      .real("min_lookahead", &t.min_lookahead)
      .real("speed", &t.speed)
      .real("goal_tolerance", &t.goal_tolerance)
      .real("wheelbase", &v.wheelbase)
      .real("track", &v.track)
      .real("steering_limit", &v.steering_limit)
      .real("max_speed", &v.max_speed)
      .real("min_turn_radius", &v.min_turn_radius);
}

void bind_detect(Binder& b, DetectParams& d) {
  b.real("crop_z_min", &d.crop_z_min)
      .real("crop_z_max", &d.crop_z_max)
      .real("cluster_tolerance", &d.cluster_tolerance)
      .integer("min_points", &d.min_points)
      .real("min_height", &d.min_height)
      .real("max_diameter", &d.max_diameter)
      .real("min_alignment", &d.min_alignment);
}

}  // namespace

KeyValues read_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValues load_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path.string() + "'");
  return read_key_values(in);
}

KeyValues key_values_from_json(const nlohmann::json& object) {
  if (!object.is_object()) throw std::invalid_argument("expected an object");
  KeyValues kv;
  const auto scalar = [](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) {
      std::ostringstream s;
      s.precision(17);
      s << v.get<double>();
      return s.str();
    }
    throw std::invalid_argument("unsupported value " + v.dump());
  };
  for (const auto& [k, v] : object.items()) {
    if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar(e);
      kv.emplace_back(k, joined);
    } else {
      kv.emplace_back(k, scalar(v));
    }
  }
  return kv;
}

KeyValues apply_config(const KeyValues& kv, PlannerBenchConfig& c) {
  Binder b;
  b.reals("densities", &c.densities)
      .integer("trials", &c.trials)
      .integer("worlds_per_density", &c.worlds_per_density)
      .integer("max_targets", &c.max_targets)
      .integer("max_trial_targets", &c.max_trial_targets)
      .seed("seed", &c.seed)
      .real("extent", &c.extent)
      .real("resolution", &c.resolution)
      .real("plan_budget", &c.plan_budget)
      .integer("plan_iterations", &c.plan_iterations)
      .real("probe_budget", &c.probe_budget)
      .integer("probe_iterations", &c.probe_iterations)
      .boolean("timing_columns", &c.timing_columns)
      .integer("threads", &c.threads)
      .custom("kind", [&c](const std::string& s) {
        if (s == "alley") c.kind = ScenarioKind::kAlley;
        else if (s == "unstructured") c.kind = ScenarioKind::kUnstructured;
        else throw std::invalid_argument("unknown kind '" + s + "'");
      });
  bind_rrt(b, c.rrt);
  return b.run(kv);
}

KeyValues apply_config(const KeyValues& kv, TrackingBenchConfig& c) {
  Binder b;
  b.real("suite_length", &c.suite_length)
      .real("path_density", &c.path_density)
      .integer("max_worlds", &c.max_worlds)
      .seed("seed", &c.seed)
      .integer("plan_iterations", &c.plan_iterations)
      .real("min_run_length", &c.min_run_length)
      .integer("maneuver_min_cusps", &c.maneuver_min_cusps)
      .reals("slips", &c.slips)
      .real("dt", &c.dt);
  bind_tracker(b, c.tracker, c.vehicle);
  return b.run(kv);
}

KeyValues apply_config(const KeyValues& kv, DetectionBenchConfig& c) {
  Binder b;
  b.integer("patches", &c.patches)
      .real("patch_size", &c.patch_size)
      .real("tree_density", &c.tree_density)
      .reals("clutter_densities", &c.clutter_densities)
      .real("point_density", &c.point_density)
      .real("point_sigma", &c.point_sigma)
      .real("match_radius", &c.match_radius)
      .seed("seed", &c.seed)
      .real("min_points_fraction", &c.min_points_fraction);
  bind_detect(b, c.detect);
  return b.run(kv);
}

KeyValues apply_config(const KeyValues& kv, MissionParams& p) {
  Binder b;
  b.integer("plan_iterations", &p.plan_iterations)
      .real("resolution", &p.resolution)
      .real("dt", &p.dt)
      .boolean("detection_enabled", &p.detection_enabled)
      .real("scan_half_angle", &p.scan_half_angle)
      .real("scan_point_density", &p.scan_point_density)
      .real("scan_duration", &p.scan_duration)
      .real("detection_gate", &p.detection_gate)
      .real("reach", &p.grasp.reach)
      .real("grab_height", &p.grasp.grab_height)
      .real("min_reach", &p.arm.min_reach)
      .real("arm_linear_speed", &p.arm.max_linear_speed)
      .real("arm_angular_speed", &p.arm.max_angular_speed)
      .integer("max_replans", &p.max_replans)
      .integer("localization_resamples", &p.localization_resamples)
      .real("pose_update_interval", &p.pose_update_interval);
  bind_rrt(b, p.rrt);
  bind_tracker(b, p.tracker, p.vehicle);
  bind_detect(b, p.detect);
  return b.run(kv);
}

KeyValues apply_config(const KeyValues& kv, NoiseModel& n) {
  Binder b;
  b.real("pose_sigma_xy", &n.pose_sigma_xy).real("pose_sigma_yaw", &n.pose_sigma_yaw).real("point_sigma", &n.point_sigma);
  return b.run(kv);
}

KeyValues apply_config(const KeyValues& kv, DetectParams& params) {
  Binder b;
  bind_detect(b, params);
  return b.run(kv);
}

ScenarioSpec scenario_from(const KeyValues& kv) {
  std::ostringstream text;
  for (const auto& [k, v] : kv) text << k << " = " << v << "\n";
  std::istringstream in(text.str());
  return parse_scenario(in);
}

void require_consumed(const KeyValues& rest) {
  if (!rest.empty()) throw std::invalid_argument("unknown key '" + rest.front().first + "'");
}

}  // namespace harvest
