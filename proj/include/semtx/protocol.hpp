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

#include "semtx/grid.hpp"
#include "semtx/modes.hpp"
#include "semtx/phy.hpp"
#include "semtx/predictor.hpp"
#include "semtx/scheduler.hpp"
#include "semtx/world.hpp"

namespace semtx::protocol {

enum class Strategy { FixedInterval, FeedbackPart, FeedbackFull, FeedbackActive, PredictOnly };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct SessionConfig {
    Strategy strategy = Strategy::FeedbackPart;
    int interval = 6;
    double sigma = 0.3;
    double theta_full_db = 3.0;
    double theta_part_db = -2.0;
    bool count_feedback_in_ledger = false;
    /// When set, the decision for slot t uses the feedback exchanged at slot t-1.
    bool feedback_delay = false;

    void validate() const;
    bool uses_feedback() const;
};

enum class Trigger { Initial, Schedule, Feedback, None };

std::string to_string(Trigger t);

struct LedgerEntry {
    int slot = 0;
    TxMode mode = TxMode::Predict;
    std::size_t forward_bytes = 0;
    std::size_t feedback_bytes = 0;
    double snr_db = 0.0;
    Trigger triggered_by = Trigger::None;
    /// A transmission was requested but no mode was feasible at this SNR.
    bool deferred = false;
};

struct SlotRecord {
    LedgerEntry ledger;
    double mse = 0.0;
    double psnr_db = 0.0;
    double miou = 0.0;
    double delta_exceed = 0.0;
    /// Exceedance seen by the transmitter through the feedback link (0 without feedback).
    double feedback_delta = 0.0;
    double forward_ber = 0.0;
};

struct LedgerTotals {
    std::size_t forward_bytes = 0;
    std::size_t feedback_bytes = 0;
    int transmission_count = 0;
    int full_count = 0;
    int part_count = 0;
    int feedback_triggered = 0;
    int schedule_triggered = 0;
    int deferred = 0;
};

struct SessionTrace {
    std::uint64_t seed = 0;
    bool count_feedback_in_ledger = false;
    std::vector<SlotRecord> slots;
};

struct SessionInputs {
    world::Scenario scenario = world::Scenario::Basic;
    /// Per-slot SNR for slots 0..num_slots.
    std::vector<double> snr_db;
    SessionConfig config;
    predictor::DegradationProfile profile;
    phy::LinkConfig link;
    /// Pre-committed plan for the active strategy; ignored by the others.
    scheduler::SchedulerPlan plan;
    std::uint64_t seed = 0;
};

/// Fraction of cells whose depth ratio in either direction exceeds 1.25.
double delta_exceed(const Grid<double>& a, const Grid<double>& b);

bool feedback_decision(const Grid<double>& true_depth, const Grid<double>& fed_back_depth, double sigma);

struct ModeDecision {
    TxMode mode = TxMode::Predict;
    bool infeasible = false;
};

/// Threshold policy for a requested transmission. FeedbackPart only ever sends
/// Part and FeedbackFull only Full; the other strategies pick Full, then Part.
ModeDecision mode_select(double snr_db, const SessionConfig& cfg, bool requested);

SessionTrace run_session(const SessionInputs& in);

/// Same, starting from a given world state instead of scene_init(scenario, seed).
SessionTrace run_session(const SessionInputs& in, const world::SceneState& initial_truth);

LedgerTotals ledger_totals(const SessionTrace& trace);

std::string trace_to_csv(const SessionTrace& trace);
std::string format_psnr(double psnr_db);

/// Throws InvariantViolation when the ledger identity or byte sets are broken.
void check_trace(const SessionTrace& trace, int num_slots);

} // namespace semtx::protocol
