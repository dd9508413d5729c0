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

#include "semtx/config.hpp"
#include "semtx/protocol.hpp"
#include "semtx/scheduler.hpp"

namespace semtx::experiment {

/// Per-slot SNR the session experiences (true blockages).
std::vector<double> actual_snr(const config::ExperimentConfig& cfg);
/// Per-slot SNR the planner sees (forecast blockages only).
std::vector<double> forecast_snr(const config::ExperimentConfig& cfg);

/// Degradation reference for the configured profile, normalized by its maximum.
std::vector<double> planning_reference(const config::ExperimentConfig& cfg);
scheduler::SchedulerPlan make_plan(const config::ExperimentConfig& cfg);

protocol::SessionInputs session_inputs(const config::ExperimentConfig& cfg, std::uint64_t seed,
                                       const scheduler::SchedulerPlan& plan);

struct SeedResult {
    std::uint64_t seed = 0;
    protocol::SessionTrace trace;
    protocol::LedgerTotals totals;
    double mean_mse = 0.0;
    double mean_psnr_db = 0.0; // PSNR of the mean MSE
    double mean_miou = 0.0;
    double mean_delta = 0.0;
};

struct Stat {
    double mean = 0.0;
    double std = 0.0; // population
};

Stat stat(const std::vector<double>& values);

struct RunSummary {
    std::string config_text;
    std::vector<SeedResult> per_seed;
    Stat mse, psnr_db, miou, forward_bytes, feedback_bytes, transmissions, feedback_triggered;
};

/// Runs every configured seed, up to `parallel` at a time; results keep seed order.
RunSummary run(const config::ExperimentConfig& cfg, int parallel = 1);

std::string summary_to_json(const RunSummary& s);

/// Writes trace_seed<N>.csv per seed plus summary.json into dir.
void write_outputs(const RunSummary& s, const std::string& dir);

/// Reloads written outputs and checks row counts and that the JSON totals equal
/// the CSV column sums. Throws InvariantViolation on any mismatch.
void verify_outputs(const std::string& dir);

/// One summary row per fixed SNR value.
std::string sweep_snr(const config::ExperimentConfig& cfg, const std::vector<double>& snr_list, int parallel);

struct StrategyRow {
    protocol::Strategy strategy;
    double snr_db = 0.0;
    int seeds = 0;
    double times = 0.0;       // mean non-initial transmissions
    double kbytes = 0.0;      // mean forward kilobytes (1 KB = 1024 B)
    double mean_mse = 0.0;
    std::size_t forward_bytes_total = 0;
    long long transmissions_total = 0;
};

std::vector<StrategyRow> strategy_table(const config::ExperimentConfig& cfg, int parallel);
std::string strategy_table_to_csv(const std::vector<StrategyRow>& rows);

struct BerRow {
    double es_n0_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double measured = 0.0;
    double analytic = 0.0;
};

/// Unit-flat AWGN 16-QAM bit error measurement against the closed form.
BerRow ber_point(double es_n0_db, std::uint64_t bits, std::uint64_t seed);
std::string ber_table_to_csv(const std::vector<BerRow>& rows);

} // namespace semtx::experiment
