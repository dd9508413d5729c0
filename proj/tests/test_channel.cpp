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

#include <chrono>
#include <cmath>

#include "doctest.h"
#include "semtx/channel.hpp"
#include "semtx/errors.hpp"

using namespace semtx::channel;

namespace {

// Handover route: two base stations 500 m apart, road 50 m off their axis.
Trajectory handover_route() {
    Trajectory t;
    t.start = {-100.0, 50.0};
    t.end = {100.0, 50.0};
    t.num_slots = 20;
    return t;
}

const std::vector<Position> kTwoBs{{-250.0, 0.0}, {250.0, 0.0}};

} // namespace

TEST_CASE("closed-form link budget values") {
    const RadioParams radio;
    const auto t0 = std::chrono::steady_clock::now();
    CHECK(std::abs(path_loss_db(1000.0, radio) - 144.386) < 0.01);
    CHECK(std::abs(path_loss_db(100.0, radio) - 106.036) < 0.01);
    CHECK(std::abs(mobile_correction(1.5) - (-0.00068)) < 0.01);
    CHECK(std::abs(noise_floor_dbm(20e6) - (-100.990)) < 0.01);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(elapsed < 1.0);
}

TEST_CASE("mobile correction sign flips near 1.5 m") {
    // 3.2 [log10(11.75 h)]^2 = 4.97 at h = 10^sqrt(4.97/3.2) / 11.75.
    const double root = std::pow(10.0, std::sqrt(4.97 / 3.2)) / 11.75;
    CHECK(mobile_correction(root) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(mobile_correction(1.0) < 0.0);
    CHECK(mobile_correction(3.0) > 0.0);
}

TEST_CASE("path loss grows by the distance slope per decade") {
    const RadioParams radio;
    const double slope = 44.9 - 6.55 * std::log10(radio.bs_height_m);
    CHECK(path_loss_db(2000.0, radio) - path_loss_db(200.0, radio) == doctest::Approx(slope).epsilon(1e-12));
    for (double d = 10.0; d < 5000.0; d *= 1.7) CHECK(path_loss_db(d * 1.1, radio) > path_loss_db(d, radio));
}

TEST_CASE("snr at known points") {
    const RadioParams radio;
    CHECK(std::abs(snr_db_at({0.0, 0.0}, {250.0, 0.0}, radio) - 4.69) < 0.01);
    CHECK(std::abs(snr_db_at({0.0, 50.0}, {250.0, 0.0}, radio) - 4.37) < 0.01);
    CHECK(snr_db_at({0.0, 0.0}, {250.0, 0.0}, radio, 20.0) ==
          doctest::Approx(snr_db_at({0.0, 0.0}, {250.0, 0.0}, radio) - 20.0));
}

TEST_CASE("handover trace is symmetric and switches cells at the midpoint") {
    const SnrForecast f = snr_trace(handover_route(), kTwoBs, RadioParams{});
    REQUIRE(f.size() == 21);
    CHECK(std::abs(f.snr_db[0] - 12.32) < 0.01);
    const double expected[] = {7.13, 6.40, 5.69, 5.02, 4.37};
    for (int k = 0; k < 5; ++k) {
        CHECK(std::abs(f.snr_db[6 + k] - expected[k]) < 0.02);
        CHECK(f.snr_db[6 + k] == doctest::Approx(f.snr_db[14 - k]).epsilon(1e-9));
    }
    for (int t = 0; t <= 10; ++t) CHECK(f.serving_bs[t] == 0);
    for (int t = 11; t <= 20; ++t) CHECK(f.serving_bs[t] == 1);
    // Minimum exactly at the midpoint.
    for (int t = 0; t <= 20; ++t) CHECK(f.snr_db[t] >= f.snr_db[10]);
}

TEST_CASE("blockages subtract their loss on covered slots only") {
    const std::vector<BlockageEvent> events{{7, 13, 20.0}};
    const SnrForecast clear = snr_trace(handover_route(), kTwoBs, RadioParams{});
    const SnrForecast blocked = snr_trace(handover_route(), kTwoBs, RadioParams{}, events);
    for (int t = 0; t <= 20; ++t) {
        const double diff = clear.snr_db[t] - blocked.snr_db[t];
        CHECK(diff == doctest::Approx((t >= 7 && t <= 13) ? 20.0 : 0.0));
    }
}

TEST_CASE("fixed snr forecast") {
    const SnrForecast f = fixed_snr(5.0, 20);
    CHECK(f.size() == 21);
    for (double s : f.snr_db) CHECK(s == 5.0);
}

TEST_CASE("invalid inputs are rejected") {
    RadioParams bad;
    bad.bandwidth_hz = 0.0;
    CHECK_THROWS_AS(bad.validate(), semtx::ConfigError);
    CHECK_THROWS(snr_trace(handover_route(), {}, RadioParams{}));
    Trajectory t = handover_route();
    t.num_slots = 0;
    CHECK_THROWS_AS(t.validate(), semtx::ConfigError);
}
