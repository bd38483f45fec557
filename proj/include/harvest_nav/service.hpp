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

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "harvest_nav/forest_sim.hpp"
#include "harvest_nav/grid_map.hpp"
#include "harvest_nav/mission.hpp"

namespace httplib {
class Server;
}

namespace harvest {

inline constexpr const char* kApiVersion = "harvest-nav-api v1";
inline constexpr const char* kApiHeader = "Harvest-Api";
inline constexpr const char* kListenEnv = "HARVEST_NAV_LISTEN";

/// Request failure with an HTTP status and a short machine-readable code:
/// unknown_session 404, invalid_request 400, stale_version 409, busy 409,
/// bad_state 409, plan_failed 422.
struct ServiceError : std::runtime_error {
  ServiceError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status(status), code(std::move(code)) {}
  int status;
  std::string code;
};

struct SessionEvent {
  std::uint64_t seq = 0;
  std::string type;
  std::string payload;  // JSON object text
  /// `{"seq":..,"type":..,"data":{..}}`
  std::string line() const;
};

/// One loaded world with its map snapshots, target queue and mission runner.
/// Every mutator is serialized on the session; the mission worker performs
/// steps while running.
class Session {
 public:
  Session(std::string id, ForestWorld world, MissionParams params, NoiseModel noise, std::uint64_t seed);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  std::uint64_t version() const;

  /// Layer raster restricted to cells whose centers fall in `bbox`, pooled
  /// over `downsample` x `downsample` blocks (mean elevation, minimum
  /// traversability, maximum occupancy).
  nlohmann::json get_layer(const std::string& name, const std::optional<Rect>& bbox, int downsample) const;
  nlohmann::json list_trees() const;
  nlohmann::json select_targets(const std::vector<int>& ids);
  /// Rejected with stale_version unless `version` is the current one; the
  /// same request replayed after it was applied returns the same answer.
  nlohmann::json edit_traversability(const std::vector<Eigen::Vector2d>& polygon, double value,
                                     std::uint64_t version);
  nlohmann::json request_plan(int target);

  nlohmann::json start();
  nlohmann::json pause();
  nlohmann::json step();
  nlohmann::json abort();
  nlohmann::json state() const;
  /// Line-delimited mission report (empty before start).
  std::string report() const;

  /// Events with seq > `since`, waiting up to `wait_ms` for the first one.
  std::vector<SessionEvent> events_since(std::uint64_t since, int wait_ms) const;
  /// True once mission_done has been published.
  bool finished() const;

 private:
  void worker();
  void publish(const std::string& type, const std::string& payload);
  nlohmann::json phase_reply() const;  // requires mutex_

  const std::string id_;
  const ForestWorld world_;
  const MissionParams params_;
  const NoiseModel noise_;
  const std::uint64_t seed_;

  mutable std::mutex mutex_;  // session state below
  GridMap2D map_;
  std::uint64_t version_ = 1;
  struct Edit {
    std::uint64_t base_version;
    std::vector<Eigen::Vector2d> polygon;
    double value;
    nlohmann::json reply;
  };
  std::vector<Edit> edits_;
  std::vector<int> targets_;
  std::unique_ptr<MissionRunner> runner_;
  bool running_ = false;
  bool stopping_ = false;
  std::condition_variable wake_;

  // Held for the whole of a mission step.
  mutable std::mutex step_mutex_;

  mutable std::mutex events_mutex_;
  mutable std::condition_variable events_cv_;
  std::vector<SessionEvent> events_;
  bool finished_ = false;

  std::thread worker_;
};

class MissionService {
 public:
  /// `scenario`: {"scenario": {ScenarioSpec keys}, "noise": {...},
  /// "mission": {MissionParams keys}, "seed": n}. All members optional.
  nlohmann::json create_session(const nlohmann::json& request);
  std::shared_ptr<Session> session(const std::string& id) const;
  void close_session(const std::string& id);

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

/// Installs the v1 HTTP routes on `server`.
void register_routes(httplib::Server& server, MissionService& service);

/// "host:port" from a flag value, then the environment, then the default.
std::pair<std::string, int> listen_address(const std::string& flag, const std::string& fallback = "127.0.0.1:8750");

}  // namespace harvest
