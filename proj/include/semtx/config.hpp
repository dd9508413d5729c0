// Copyright 2026 The semtx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semtx/channel.hpp"
#include "semtx/phy.hpp"
#include "semtx/predictor.hpp"
#include "semtx/protocol.hpp"
#include "semtx/scheduler.hpp"
#include "semtx/world.hpp"

namespace semtx::config {

enum class ChannelMode { Fixed, Trajectory };

/// Everything one experiment needs. Parsed from a flat `key = value` file;
/// see docs/config.md for the grammar and the key list.
struct ExperimentConfig {
    world::Scenario scenario = world::Scenario::Basic;
    int num_slots = 20;

    ChannelMode channel_mode = ChannelMode::Fixed;
    double fixed_snr_db = 5.0;
    std::vector<channel::Position> base_stations{{-250.0, 0.0}, {250.0, 0.0}};
    std::vector<channel::BlockageEvent> blockages;
    std::vector<channel::BlockageEvent> blockages_forecast;
    channel::RadioParams radio;
    channel::Position route_start{-100.0, 50.0};
    channel::Position route_end{100.0, 50.0};

    protocol::SessionConfig protocol;
    predictor::DegradationProfile profile = predictor::DegradationProfile::defaults(world::Scenario::Basic);
    scheduler::PlannerParams planner;
    int reference_seeds = 50;
    phy::LinkConfig link;

    std::vector<std::uint64_t> seeds{0};
    std::string output_dir = "out";

    /// Throws ConfigError on any inconsistent field.
    void validate() const;
    channel::Trajectory trajectory() const;
};

/// Parses and validates. Unknown keys, duplicates and malformed values throw ConfigError.
ExperimentConfig parse(const std::string& text);
ExperimentConfig load(const std::string& path);

/// Canonical form: every key, sorted, one per line.
std::string serialize(const ExperimentConfig& cfg);

/// All accepted keys in sorted order.
std::vector<std::string> known_keys();

std::string format_seeds(const std::vector<std::uint64_t>& seeds);
std::vector<std::uint64_t> parse_seeds(const std::string& text);

} // namespace semtx::config
