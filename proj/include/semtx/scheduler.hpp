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

#include <string>
#include <vector>

#include "semtx/modes.hpp"

namespace semtx::scheduler {

struct PlannerParams {
    double lambda_full = 4.0;
    double lambda_part = 2.0;
    double theta_full_db = 3.0;
    double theta_part_db = -2.0;
    double infeasible_penalty = 1e6;

    void validate() const;
};

struct PlanEntry {
    int slot = 0;
    TxMode mode = TxMode::Part;

    friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

/// Pre-committed transmissions for slots 1..T. Slot 0 is always a full
/// transmission and is never listed.
struct SchedulerPlan {
    std::vector<PlanEntry> entries;
    double objective_value = 0.0;
    /// Set when no slot of the horizon admits any transmission.
    bool infeasible = false;

    bool contains(int slot) const;
    std::vector<int> slots() const;
};

/// Exact dynamic program over slots 1..T where T = snr_db.size() - 1.
///
/// The state is the number of slots since the last reseed. A slot costs
/// L[gap] (gap clamped to the last entry of L) plus, on transmission slots,
/// the cheaper feasible mode penalty. Ties prefer fewer transmissions, then
/// lexicographically earlier slots, then Full over Part.
SchedulerPlan plan_active(const std::vector<double>& snr_db, const std::vector<double>& L,
                          const PlannerParams& params);

/// Branch-and-bound enumeration of every plan under the same cost model and
/// tie-breaks. Intended for horizons up to about 22 slots.
SchedulerPlan exhaustive_oracle(const std::vector<double>& snr_db, const std::vector<double>& L,
                                const PlannerParams& params);

/// Objective of an arbitrary set of transmission slots under the planner's cost model.
double evaluate_plan(const std::vector<double>& snr_db, const std::vector<double>& L,
                     const PlannerParams& params, const std::vector<int>& slots);

/// Slots 1..T hit by a fixed interval of k (multiples of k).
std::vector<int> fixed_interval_slots(int num_slots, int k);

/// Runtime merge: a slot transmits when the plan lists it or feedback asks.
bool merge_runtime(const SchedulerPlan& plan, bool feedback_requested, int slot);

/// Entries, objective and the parameters echoed back.
std::string plan_to_json(const SchedulerPlan& plan, const PlannerParams& params);
SchedulerPlan plan_from_json(const std::string& text);

} // namespace semtx::scheduler
