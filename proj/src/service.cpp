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

#include "harvest_nav/service.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "httplib.h"

#include "harvest_nav/config.hpp"
#include "harvest_nav/seeding.hpp"
#include "harvest_nav/terrain.hpp"

namespace harvest {

using nlohmann::json;

namespace {

json pose_json(const Pose2d& p) { return json::array({p.x(), p.y(), p.yaw()}); }

ServiceError invalid(const std::string& msg) { return ServiceError(400, "invalid_request", msg); }

}  // namespace

std::string SessionEvent::line() const {
  return json{{"seq", seq}, {"type", type}, {"data", json::parse(payload)}}.dump();
}

Session::Session(std::string id, ForestWorld world, MissionParams params, NoiseModel noise, std::uint64_t seed)
    : id_(std::move(id)),
      world_(std::move(world)),
      params_(std::move(params)),
      noise_(noise),
      seed_(seed),
      map_(mission_occupancy(world_, params_.resolution)) {
  worker_ = std::thread([this] { worker(); });
}

Session::~Session() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  worker_.join();
}

std::uint64_t Session::version() const {
  std::lock_guard lock(mutex_);
  return version_;
}

void Session::worker() {
  std::unique_lock lock(mutex_);
  for (;;) {
    wake_.wait(lock, [&] { return stopping_ || (running_ && runner_ && !runner_->done()); });
    if (stopping_) return;
    MissionRunner* runner = runner_.get();
    lock.unlock();
    bool done = false;
    {
      std::lock_guard step(step_mutex_);
      runner->step();
      done = runner->done();
    }
    lock.lock();
    if (done) running_ = false;
  }
}

void Session::publish(const std::string& type, const std::string& payload) {
  {
    std::lock_guard lock(events_mutex_);
    events_.push_back({events_.size() + 1, type, payload});
    if (type == "mission_done") finished_ = true;
  }
  events_cv_.notify_all();
}

json Session::get_layer(const std::string& name, const std::optional<Rect>& bbox, int downsample) const {
  if (name != layers::kElevation && name != layers::kTraversability && name != layers::kOccupancy)
    throw invalid("unknown layer '" + name + "'");
  if (downsample < 1) throw invalid("downsample must be >= 1");
  std::lock_guard lock(mutex_);
  const GridMap2D& m = map_;
  const double res = m.resolution();
  int r0 = 0, c0 = 0, r1 = m.rows() - 1, c1 = m.cols() - 1;
  if (bbox) {
    if (!(bbox->min.x() <= bbox->max.x() && bbox->min.y() <= bbox->max.y())) throw invalid("empty bbox");
    c0 = std::max(c0, static_cast<int>(std::ceil((bbox->min.x() - m.origin().x()) / res)));
    r0 = std::max(r0, static_cast<int>(std::ceil((bbox->min.y() - m.origin().y()) / res)));
    c1 = std::min(c1, static_cast<int>(std::floor((bbox->max.x() - m.origin().x()) / res)));
    r1 = std::min(r1, static_cast<int>(std::floor((bbox->max.y() - m.origin().y()) / res)));
  }
  const int rows = r1 >= r0 ? (r1 - r0) / downsample + 1 : 0;
  const int cols = c1 >= c0 ? (c1 - c0) / downsample + 1 : 0;
  const auto& layer = m.layer(name);
  json data = json::array();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double acc = name == layers::kTraversability ? 1e300 : (name == layers::kOccupancy ? -1e300 : 0.0);
      int n = 0;
      for (int rr = r0 + r * downsample; rr <= std::min(r1, r0 + (r + 1) * downsample - 1); ++rr) {
        for (int cc = c0 + c * downsample; cc <= std::min(c1, c0 + (c + 1) * downsample - 1); ++cc) {
          const double v = layer(rr, cc);
          if (GridMap2D::is_nodata(v)) continue;
          if (name == layers::kTraversability) acc = std::min(acc, v);
          else if (name == layers::kOccupancy) acc = std::max(acc, v);
          else acc += v;
          ++n;
        }
      }
      if (n == 0) data.push_back(nullptr);
      else data.push_back(name == layers::kElevation ? acc / n : acc);
    }
  }
  const Eigen::Vector2d origin = m.cell_center({r0, c0}) + Eigen::Vector2d::Constant(0.5 * (downsample - 1) * res);
  return json{{"name", name},
              {"version", version_},
              {"resolution", res * downsample},
              {"origin", {origin.x(), origin.y()}},
              {"rows", rows},
              {"cols", cols},
              {"downsample", downsample},
              {"data", data}};
}

json Session::list_trees() const {
  json trees = json::array();
  for (std::size_t i = 0; i < world_.trees.size(); ++i) {
    const Tree& t = world_.trees[i];
    trees.push_back({{"id", i}, {"x", t.position.x()}, {"y", t.position.y()}, {"radius", t.radius},
                     {"height", t.height}});
  }
  return json{{"trees", trees}};
}

json Session::select_targets(const std::vector<int>& ids) {
  for (int id : ids)
    if (id < 0 || id >= static_cast<int>(world_.trees.size()))
      throw invalid("unknown tree id " + std::to_string(id));
  std::lock_guard lock(mutex_);
  if (runner_) throw ServiceError(409, "bad_state", "mission already started");
  targets_ = ids;
  return json{{"targets", targets_}, {"version", version_}};
}

json Session::edit_traversability(const std::vector<Eigen::Vector2d>& polygon, double value, std::uint64_t version) {
  if (!(value >= 0.0 && value <= 1.0)) throw invalid("value must lie in [0, 1]");
  std::lock_guard lock(mutex_);
  if (version != version_) {
    for (const Edit& e : edits_)
      if (e.base_version == version && e.polygon == polygon && e.value == value) return e.reply;
    throw ServiceError(409, "stale_version",
                       "stale version " + std::to_string(version) + ", current is " + std::to_string(version_));
  }
  if (polygon.size() < 3) return json{{"version", version_}, {"cells_changed", 0}, {"warning", false}};
  std::unique_lock step(step_mutex_, std::try_to_lock);
  if (!step.owns_lock()) throw ServiceError(409, "busy", "a mission step is executing");
  CorrectionResult r = apply_correction(map_, polygon, value);
  map_ = std::move(r.map);
  ++version_;
  if (runner_) runner_->set_occupancy(map_);
  json reply{{"version", version_}, {"cells_changed", r.cells_changed}, {"warning", r.warning}};
  edits_.push_back({version, polygon, value, reply});
  return reply;
}

json Session::request_plan(int target) {
  if (target < 0 || target >= static_cast<int>(world_.trees.size()))
    throw invalid("unknown tree id " + std::to_string(target));
  GridMap2D map;
  std::uint64_t version = 0;
  Pose2d start = default_start_pose(world_);
  {
    std::lock_guard lock(mutex_);
    map = map_;
    version = version_;
    if (runner_) {
      std::lock_guard step(step_mutex_);
      start = runner_->true_pose();
    }
  }
  RRTParams rp = params_.rrt;
  rp.rng_seed = seed_of(seed_, 0x91a, target, 0);
  rp.max_iterations = params_.plan_iterations;
  rp.max_time = std::max(rp.max_time, 600.0);
  PlanOutcome o;
  try {
    o = plan(start, world_.trees[target].position, map, params_.approach, rp);
  } catch (const InvalidTarget& e) {
    throw ServiceError(422, "plan_failed", e.what());
  }
  if (!o.ok()) throw ServiceError(422, "plan_failed", o.error());
  const PlanResult& r = o.result;
  json poses = json::array(), dirs = json::array();
  for (const Pose2d& p : r.path.poses()) poses.push_back(pose_json(p));
  for (Direction d : r.path.directions()) dirs.push_back(sign_of(d));
  return json{{"target", target},
              {"version", version},
              {"approach_pose", pose_json(r.approach_pose)},
              {"poses", poses},
              {"directions", dirs},
              {"length", r.path.length()},
              {"cusps", r.path.cusp_count()},
              {"t_approach", r.t_approach},
              {"t_init", r.t_first_solution},
              {"t_total", r.t_total},
              {"d_init", r.length_initial},
              {"d_final", r.length_final},
              {"d_lb", r.length_lower_bound}};
}

json Session::phase_reply() const {
  std::string phase = "Idle";
  if (runner_) {
    std::lock_guard step(step_mutex_);
    phase = to_string(runner_->phase());
  }
  return json{{"phase", phase}, {"running", running_}, {"version", version_}};
}

json Session::start() {
  std::lock_guard lock(mutex_);
  if (!runner_) {
    runner_ = std::make_unique<MissionRunner>(
        world_, map_, targets_, params_, noise_, seed_,
        [this](const std::string& type, const std::string& payload) { publish(type, payload); });
  }
  if (!runner_->done()) running_ = true;
  wake_.notify_all();
  return phase_reply();
}

json Session::pause() {
  std::lock_guard lock(mutex_);
  if (!runner_) throw ServiceError(409, "bad_state", "mission not started");
  running_ = false;
  return phase_reply();  // waits for a step in flight
}

json Session::step() {
  MissionRunner* runner = nullptr;
  {
    std::lock_guard lock(mutex_);
    if (!runner_) {
      runner_ = std::make_unique<MissionRunner>(
          world_, map_, targets_, params_, noise_, seed_,
          [this](const std::string& type, const std::string& payload) { publish(type, payload); });
    }
    if (running_) throw ServiceError(409, "bad_state", "mission is running; pause first");
    runner = runner_.get();
  }
  {
    std::lock_guard step(step_mutex_);
    runner->step();
  }
  std::lock_guard lock(mutex_);
  return phase_reply();
}

json Session::abort() {
  std::lock_guard lock(mutex_);
  if (!runner_) throw ServiceError(409, "bad_state", "mission not started");
  running_ = false;
  {
    std::lock_guard step(step_mutex_);
    runner_->abort();
  }
  return phase_reply();
}

json Session::state() const {
  std::lock_guard lock(mutex_);
  json j = phase_reply();
  j["targets"] = targets_;
  std::lock_guard ev(events_mutex_);
  j["seq"] = events_.size();
  return j;
}

std::string Session::report() const {
  std::lock_guard lock(mutex_);
  if (!runner_) return {};
  std::lock_guard step(step_mutex_);
  std::ostringstream out;
  write_report_jsonl(out, runner_->report());
  return out.str();
}

std::vector<SessionEvent> Session::events_since(std::uint64_t since, int wait_ms) const {
  std::unique_lock lock(events_mutex_);
  events_cv_.wait_for(lock, std::chrono::milliseconds(std::max(0, wait_ms)),
                      [&] { return events_.size() > since; });
  if (events_.size() <= since) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(since), events_.end()};
}

bool Session::finished() const {
  std::lock_guard lock(events_mutex_);
  return finished_;
}

json MissionService::create_session(const json& request) {
  if (!request.is_object()) throw invalid("expected an object");
  for (const auto& [k, v] : request.items())
    if (k != "scenario" && k != "noise" && k != "mission" && k != "seed") throw invalid("unknown key '" + k + "'");
  ForestWorld world;
  MissionParams params;
  NoiseModel noise;
  std::uint64_t seed = 1;
  try {
    const ScenarioSpec spec = scenario_from(key_values_from_json(request.value("scenario", json::object())));
    require_consumed(apply_config(key_values_from_json(request.value("noise", json::object())), noise));
    require_consumed(apply_config(key_values_from_json(request.value("mission", json::object())), params));
    if (request.contains("seed")) seed = request["seed"].get<std::uint64_t>();
    world = generate_forest(spec);
  } catch (const ServiceError&) {
    throw;
  } catch (const json::exception& e) {
    throw invalid(e.what());
  } catch (const std::exception& e) {
    throw invalid(e.what());
  }
  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "s" + std::to_string(next_id_++);
  }
  auto session = std::make_shared<Session>(id, std::move(world), params, noise, seed);
  const std::size_t trees = session->list_trees()["trees"].size();
  std::lock_guard lock(mutex_);
  sessions_[id] = session;
  return json{{"session", id}, {"version", 1}, {"trees", trees}, {"api", kApiVersion}};
}

std::shared_ptr<Session> MissionService::session(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "unknown session '" + id + "'");
  return it->second;
}

void MissionService::close_session(const std::string& id) {
  std::shared_ptr<Session> s;
  {
    std::lock_guard lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "unknown session '" + id + "'");
    s = it->second;
    sessions_.erase(it);
  }
}

namespace {

json body_json(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw invalid(std::string("malformed body: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw invalid(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw invalid(std::string("bad field '") + key + "'");
  }
}

using Handler = std::function<json(const httplib::Request&)>;

httplib::Server::Handler wrap(Handler h) {
  return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
    res.set_header(kApiHeader, kApiVersion);
    json reply;
    try {
      if (req.has_header(kApiHeader) && req.get_header_value(kApiHeader) != kApiVersion)
        throw ServiceError(400, "version_mismatch", std::string("server speaks ") + kApiVersion);
      reply = h(req);
      res.status = 200;
    } catch (const ServiceError& e) {
      res.status = e.status;
      reply = {{"error", e.code}, {"message", e.what()}};
    } catch (const std::invalid_argument& e) {
      res.status = 400;
      reply = {{"error", "invalid_request"}, {"message", e.what()}};
    } catch (const std::exception& e) {
      res.status = 500;
      reply = {{"error", "internal"}, {"message", e.what()}};
    }
    res.set_content(reply.dump() + "\n", "application/json");
  };
}

std::optional<Rect> parse_bbox(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  try {
    while (std::getline(in, item, ',')) v.push_back(std::stod(item));
  } catch (const std::exception&) {
    throw invalid("bbox must be xmin,ymin,xmax,ymax");
  }
  if (v.size() != 4) throw invalid("bbox must be xmin,ymin,xmax,ymax");
  return Rect{{v[0], v[1]}, {v[2], v[3]}};
}

std::uint64_t parse_seq(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw invalid("bad sequence number '" + s + "'");
  }
}

}  // namespace

void register_routes(httplib::Server& server, MissionService& service) {
  const std::string sid = R"(/v1/sessions/([^/]+))";
  server.Get("/v1/handshake", wrap([](const httplib::Request&) { return json{{"api", kApiVersion}}; }));
  server.Post("/v1/sessions", wrap([&](const httplib::Request& req) { return service.create_session(body_json(req)); }));
  server.Delete(sid, wrap([&](const httplib::Request& req) {
                  service.close_session(req.matches[1]);
                  return json{{"closed", std::string(req.matches[1])}};
                }));
  server.Get(sid + "/layers/([^/]+)", wrap([&](const httplib::Request& req) {
               std::optional<Rect> bbox;
               if (req.has_param("bbox")) bbox = parse_bbox(req.get_param_value("bbox"));
               int down = 1;
               if (req.has_param("downsample")) down = static_cast<int>(parse_seq(req.get_param_value("downsample")));
               return service.session(req.matches[1])->get_layer(req.matches[2], bbox, down);
             }));
  server.Get(sid + "/trees", wrap([&](const httplib::Request& req) { return service.session(req.matches[1])->list_trees(); }));
  server.Post(sid + "/targets", wrap([&](const httplib::Request& req) {
                const json b = body_json(req);
                return service.session(req.matches[1])->select_targets(field<std::vector<int>>(b, "ids"));
              }));
  server.Post(sid + "/traversability", wrap([&](const httplib::Request& req) {
                const json b = body_json(req);
                std::vector<Eigen::Vector2d> polygon;
                for (const auto& p : field<std::vector<std::vector<double>>>(b, "polygon")) {
                  if (p.size() != 2) throw invalid("polygon vertices are [x, y]");
                  polygon.emplace_back(p[0], p[1]);
                }
                return service.session(req.matches[1])
                    ->edit_traversability(polygon, field<double>(b, "value"), field<std::uint64_t>(b, "version"));
              }));
  server.Post(sid + "/plan", wrap([&](const httplib::Request& req) {
                const json b = body_json(req);
                return service.session(req.matches[1])->request_plan(field<int>(b, "target"));
              }));
  server.Post(sid + "/mission/(start|pause|step|abort)", wrap([&](const httplib::Request& req) {
                const auto s = service.session(req.matches[1]);
                const std::string op = req.matches[2];
                if (op == "start") return s->start();
                if (op == "pause") return s->pause();
                if (op == "step") return s->step();
                return s->abort();
              }));
  server.Get(sid + "/mission", wrap([&](const httplib::Request& req) { return service.session(req.matches[1])->state(); }));
  server.Get(sid + "/report", [&](const httplib::Request& req, httplib::Response& res) {
    res.set_header(kApiHeader, kApiVersion);
    try {
      res.set_content(service.session(req.matches[1])->report(), "application/x-ndjson");
    } catch (const ServiceError& e) {
      res.status = e.status;
      res.set_content(json{{"error", e.code}, {"message", e.what()}}.dump() + "\n", "application/json");
    }
  });
  // Long poll: events after `since`, one record per line.
  server.Get(sid + "/events", [&](const httplib::Request& req, httplib::Response& res) {
    res.set_header(kApiHeader, kApiVersion);
    try {
      const auto s = service.session(req.matches[1]);
      const std::uint64_t since = req.has_param("since") ? parse_seq(req.get_param_value("since")) : 0;
      const int wait = req.has_param("wait_ms") ? static_cast<int>(parse_seq(req.get_param_value("wait_ms"))) : 0;
      std::string body;
      for (const SessionEvent& e : s->events_since(since, std::min(wait, 30000))) body += e.line() + "\n";
      res.set_content(body, "application/x-ndjson");
    } catch (const ServiceError& e) {
      res.status = e.status;
      res.set_content(json{{"error", e.code}, {"message", e.what()}}.dump() + "\n", "application/json");
    }
  });
  // Persistent stream: a handshake line, then events after `since` (or the
  // Last-Event-ID header) as they happen; closes after mission_done.
  server.Get(sid + "/stream", [&](const httplib::Request& req, httplib::Response& res) {
    res.set_header(kApiHeader, kApiVersion);
    std::shared_ptr<Session> s;
    std::uint64_t since = 0;
    try {
      s = service.session(req.matches[1]);
      if (req.has_param("since")) since = parse_seq(req.get_param_value("since"));
      else if (req.has_header("Last-Event-ID")) since = parse_seq(req.get_header_value("Last-Event-ID"));
    } catch (const ServiceError& e) {
      res.status = e.status;
      res.set_content(json{{"error", e.code}, {"message", e.what()}}.dump() + "\n", "application/json");
      return;
    }
    auto cursor = std::make_shared<std::uint64_t>(since);
    auto greeted = std::make_shared<bool>(false);
    res.set_chunked_content_provider("application/x-ndjson", [s, cursor, greeted](std::size_t, httplib::DataSink& sink) {
      if (!*greeted) {
        const std::string hello =
            json{{"api", kApiVersion}, {"session", s->id()}, {"since", *cursor}}.dump() + "\n";
        if (!sink.write(hello.data(), hello.size())) return false;
        *greeted = true;
      }
      bool done = s->finished() && s->events_since(*cursor, 0).empty();
      for (const SessionEvent& e : s->events_since(*cursor, 200)) {
        const std::string line = e.line() + "\n";
        if (!sink.write(line.data(), line.size())) return false;
        *cursor = e.seq;
        done = done || e.type == "mission_done";
      }
      if (done) sink.done();
      return true;
    });
  });
}

std::pair<std::string, int> listen_address(const std::string& flag, const std::string& fallback) {
  std::string spec = flag;
  if (spec.empty())
    if (const char* env = std::getenv(kListenEnv)) spec = env;
  if (spec.empty()) spec = fallback;
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos || colon == 0) throw std::invalid_argument("listen address must be host:port");
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1) throw std::invalid_argument(spec);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad port in '" + spec + "'");
  }
  if (port < 0 || port > 65535) throw std::invalid_argument("bad port in '" + spec + "'");
  return {spec.substr(0, colon), port};
}

}  // namespace harvest
