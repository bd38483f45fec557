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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "harvest_nav/bench.hpp"
#include "harvest_nav/forest_sim.hpp"
#include "harvest_nav/mission.hpp"

namespace harvest {

// Config files use the scenario file syntax: `key = value` per line, '#'
// comments. List values are comma separated.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues read_key_values(std::istream& in);
KeyValues load_key_values(const std::filesystem::path& path);
/// Flat JSON object to key/values; arrays become comma lists.
KeyValues key_values_from_json(const nlohmann::json& object);

// Each apply_config() consumes the keys it knows and returns the rest. Malformed
// values throw std::invalid_argument.
KeyValues apply_config(const KeyValues& kv, PlannerBenchConfig& config);
KeyValues apply_config(const KeyValues& kv, TrackingBenchConfig& config);
KeyValues apply_config(const KeyValues& kv, DetectionBenchConfig& config);
KeyValues apply_config(const KeyValues& kv, MissionParams& params);
KeyValues apply_config(const KeyValues& kv, NoiseModel& noise);
KeyValues apply_config(const KeyValues& kv, DetectParams& params);

/// Scenario from key/values; unknown keys throw.
ScenarioSpec scenario_from(const KeyValues& kv);
/// Throws std::invalid_argument naming the first key if `rest` is not empty.
void require_consumed(const KeyValues& rest);

}  // namespace harvest
