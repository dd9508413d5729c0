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

#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "semtx/config.hpp"
#include "semtx/errors.hpp"

using namespace semtx;
using namespace semtx::config;

TEST_CASE("defaults parse from an empty file") {
    const ExperimentConfig c = parse("");
    CHECK(c.scenario == world::Scenario::Basic);
    CHECK(c.num_slots == 20);
    CHECK(c.protocol.interval == 6);
    CHECK(c.protocol.sigma == 0.3);
    CHECK(c.planner.lambda_full == 4.0);
    CHECK(c.seeds == std::vector<std::uint64_t>{0});
}

TEST_CASE("serialization is a fixed point") {
    const std::string text = "# comment\n"
                             "scenario = crossroad\n"
                             "channel.mode = trajectory\n"
                             "channel.blockages = 7-13@20;15-15@3.5\n"
                             "protocol.strategy = feedback_active\n"
                             "protocol.theta_full_db = 5.5\n"
                             "protocol.theta_part_db = 1\n"
                             "link.fading = rayleigh_block\n"
                             "run.seeds = 0-3,9\n";
    const ExperimentConfig a = parse(text);
    const std::string once = serialize(a);
    const std::string twice = serialize(parse(once));
    CHECK(once == twice);
    CHECK(a.seeds == std::vector<std::uint64_t>{0, 1, 2, 3, 9});
    CHECK(a.blockages.size() == 2);
    CHECK(a.blockages[1].extra_loss_db == 3.5);
    CHECK(a.planner.theta_part_db == 1.0);
    CHECK(a.profile.heading_noise_rad_per_slot > 0.0);
    for (const auto& k : known_keys()) CHECK(once.find(k + " = ") != std::string::npos);
}

TEST_CASE("scenario defaults yield to explicit keys") {
    const ExperimentConfig a = parse("predictor.pos_noise_std_m = 0.01\nscenario = busy\n");
    CHECK(a.profile.pos_noise_std_m_per_slot == 0.01);
    CHECK(a.profile.scenario == world::Scenario::Busy);
}

TEST_CASE("malformed configs are rejected") {
    CHECK_THROWS_AS(parse("no_such_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("scenario = basic\nscenario = busy\n"), ConfigError);
    CHECK_THROWS_AS(parse("just words\n"), ConfigError);
    CHECK_THROWS_AS(parse("session.num_slots = ten\n"), ConfigError);
    CHECK_THROWS_AS(parse("session.num_slots = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("protocol.sigma = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("protocol.count_feedback_in_ledger = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse("channel.bs = 1,2,3\n"), ConfigError);
    CHECK_THROWS_AS(parse("channel.blockages = 9-3@20\n"), ConfigError);
    CHECK_THROWS_AS(parse("planner.lambda_part = 5\n"), ConfigError);
    CHECK_THROWS_AS(parse("scenario = highway\n"), ConfigError);
    CHECK_THROWS_AS(parse("run.seeds = 5-2\n"), ConfigError);
    CHECK_THROWS_AS(load("/nonexistent/dir/x.conf"), ConfigError);
}

TEST_CASE("seed list grammar") {
    CHECK(parse_seeds("0-2, 7") == std::vector<std::uint64_t>{0, 1, 2, 7});
    CHECK(format_seeds({0, 1, 2, 7}) == "0-2,7");
    CHECK(parse_seeds(format_seeds({4, 5, 6, 10, 11})) == std::vector<std::uint64_t>{4, 5, 6, 10, 11});
    CHECK_THROWS_AS(parse_seeds(""), ConfigError);
    CHECK_THROWS_AS(parse_seeds("a-b"), ConfigError);
}

TEST_CASE("shipped configs load") {
    const char* dir = std::getenv("SEMTX_CONFIG_DIR");
    if (!dir) return;
    for (const char* name : {"basic.conf", "handover.conf", "blockage.conf", "crossroad.conf"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load(std::string(dir) + "/" + name));
    }
}
