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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "semtx/config.hpp"
#include "semtx/errors.hpp"
#include "semtx/experiment.hpp"
#include "semtx/scheduler.hpp"

using namespace semtx;
using namespace semtx::scheduler;

namespace {

struct Instance {
    std::vector<double> snr;
    std::vector<double> L;
    PlannerParams p;
};

Instance random_instance(std::mt19937_64& gen, int T) {
    std::uniform_real_distribution<double> snr(-6.0, 12.0);
    std::uniform_real_distribution<double> inc(0.0, 1.5);
    std::uniform_real_distribution<double> lam(0.5, 4.0);
    Instance in;
    in.snr.resize(static_cast<std::size_t>(T) + 1);
    for (auto& s : in.snr) s = snr(gen);
    in.L.assign(static_cast<std::size_t>(T) + 1, 0.0);
    for (std::size_t i = 1; i < in.L.size(); ++i) in.L[i] = in.L[i - 1] + inc(gen);
    in.p.lambda_part = lam(gen);
    in.p.lambda_full = in.p.lambda_part + lam(gen);
    in.p.infeasible_penalty = 1e3;
    return in;
}

// Brute force over transmission subsets. Each chosen slot pays its cheapest
// feasible mode; idle slots pay L at the current gap.
double brute_force(const Instance& in) {
    const int T = static_cast<int>(in.snr.size()) - 1;
    double best = INFINITY;
    for (unsigned mask = 0; mask < (1u << T); ++mask) {
        double cost = 0.0;
        int gap = 0;
        for (int t = 1; t <= T; ++t) {
            if (mask & (1u << (t - 1))) {
                const double s = in.snr[t];
                double c = in.p.infeasible_penalty;
                if (s >= in.p.theta_part_db) c = in.p.lambda_part;
                if (s >= in.p.theta_full_db) c = std::min(c, in.p.lambda_full);
                cost += in.L[0] + c;
                gap = 0;
            } else {
                ++gap;
                cost += in.L[std::min<std::size_t>(gap, in.L.size() - 1)];
            }
        }
        best = std::min(best, cost);
    }
    return best;
}

config::ExperimentConfig handover_config() {
    return config::parse("scenario = basic\n"
                         "channel.mode = trajectory\n"
                         "protocol.strategy = feedback_active\n"
                         "protocol.theta_full_db = 5.5\n"
                         "protocol.theta_part_db = 5.5\n"
                         "planner.lambda_full = 4\n"
                         "planner.lambda_part = 2\n");
}

} // namespace

TEST_CASE("dynamic program matches brute force") {
    std::mt19937_64 gen(2024);
    for (int k = 0; k < 200; ++k) {
        const int T = 3 + k % 10;
        const Instance in = random_instance(gen, T);
        const SchedulerPlan dp = plan_active(in.snr, in.L, in.p);
        const double bf = brute_force(in);
        CAPTURE(k);
        CHECK(dp.objective_value == doctest::Approx(bf).epsilon(1e-12));
        CHECK(evaluate_plan(in.snr, in.L, in.p, dp.slots()) == doctest::Approx(dp.objective_value).epsilon(1e-12));
        const SchedulerPlan ex = exhaustive_oracle(in.snr, in.L, in.p);
        CHECK(ex.entries == dp.entries);
        CHECK(ex.objective_value == doctest::Approx(dp.objective_value).epsilon(1e-12));
    }
}

TEST_CASE("zero loss at high SNR plans nothing") {
    const std::vector<double> snr(21, 15.0);
    const std::vector<double> L(21, 0.0);
    const SchedulerPlan p = plan_active(snr, L, {});
    CHECK(p.entries.empty());
    CHECK(p.objective_value == 0.0);
    CHECK_FALSE(p.infeasible);
}

TEST_CASE("all slots below the part threshold") {
    const std::vector<double> snr(21, -10.0);
    std::vector<double> L(21);
    for (int i = 0; i < 21; ++i) L[i] = i;
    const SchedulerPlan p = plan_active(snr, L, {});
    CHECK(p.infeasible);
    CHECK(p.entries.empty());
}

TEST_CASE("planned slots respect thresholds") {
    std::mt19937_64 gen(7);
    for (int k = 0; k < 100; ++k) {
        const Instance in = random_instance(gen, 20);
        const SchedulerPlan plan = plan_active(in.snr, in.L, in.p);
        for (const auto& e : plan.entries) {
            const double s = in.snr[e.slot];
            CHECK(s >= in.p.theta_part_db);
            if (e.mode == TxMode::Full) CHECK(s >= in.p.theta_full_db);
            CHECK(e.mode != TxMode::Predict);
        }
    }
}

TEST_CASE("objective grows with the part cost") {
    std::mt19937_64 gen(11);
    for (int k = 0; k < 50; ++k) {
        Instance in = random_instance(gen, 15);
        const double lo = plan_active(in.snr, in.L, in.p).objective_value;
        in.p.lambda_part *= 1.5;
        in.p.lambda_full = std::max(in.p.lambda_full, in.p.lambda_part + 0.1);
        CHECK(plan_active(in.snr, in.L, in.p).objective_value >= lo);
    }
}

TEST_CASE("handover plan brackets the outage") {
    const config::ExperimentConfig cfg = handover_config();
    const auto snr = experiment::forecast_snr(cfg);
    for (int t : {9, 10, 11}) CHECK(snr[t] < 5.5);
    const SchedulerPlan plan = experiment::make_plan(cfg);
    const auto slots = plan.slots();
    REQUIRE(!slots.empty());
    CHECK(std::none_of(slots.begin(), slots.end(), [](int t) { return t >= 9 && t <= 11; }));
    CHECK(std::any_of(slots.begin(), slots.end(), [](int t) { return t >= 5 && t <= 8; }));
    CHECK(std::any_of(slots.begin(), slots.end(), [](int t) { return t >= 12 && t <= 16; }));
    const auto L = experiment::planning_reference(cfg);
    const double fixed = evaluate_plan(snr, L, cfg.planner, fixed_interval_slots(20, 6));
    CHECK(plan.objective_value <= fixed);
}

TEST_CASE("runtime merge") {
    SchedulerPlan plan;
    plan.entries = {{7, TxMode::Part}, {14, TxMode::Full}};
    CHECK(merge_runtime(plan, false, 7));
    CHECK(merge_runtime(plan, true, 8));
    CHECK_FALSE(merge_runtime(plan, false, 8));
    CHECK(merge_runtime(SchedulerPlan{}, true, 3));
}

TEST_CASE("fixed interval slots") {
    CHECK(fixed_interval_slots(20, 6) == std::vector<int>{6, 12, 18});
    CHECK(fixed_interval_slots(5, 1) == std::vector<int>{1, 2, 3, 4, 5});
    CHECK_THROWS_AS(fixed_interval_slots(20, 0), InputError);
}

TEST_CASE("plan json round trip") {
    SchedulerPlan plan;
    plan.entries = {{3, TxMode::Full}, {9, TxMode::Part}};
    plan.objective_value = 12.625;
    const SchedulerPlan back = plan_from_json(plan_to_json(plan, {}));
    CHECK(back.entries == plan.entries);
    CHECK(back.objective_value == plan.objective_value);
    CHECK_FALSE(back.infeasible);
    CHECK_THROWS_AS(plan_from_json("{\"entries\": [{\"slot\": 3}]}"), InputError);
    CHECK_THROWS_AS(plan_from_json("not json"), InputError);
    CHECK_THROWS_AS(plan_from_json(R"({"entries":[{"slot":5,"mode":"Part"},{"slot":4,"mode":"Part"}],"objective":1})"),
                    InputError);
}

TEST_CASE("planner parameter validation") {
    PlannerParams p;
    p.lambda_full = 1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.theta_full_db = -5.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(exhaustive_oracle(std::vector<double>(30, 1.0), {0.0}, {}), InputError);
}
