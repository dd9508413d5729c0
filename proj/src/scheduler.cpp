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

#include "semtx/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "json.hpp"

#include "semtx/errors.hpp"

namespace semtx::scheduler {

namespace {

struct Candidate {
    double cost = 0.0;
    std::vector<PlanEntry> entries;
};

// Tie-break order: cost, fewer transmissions, earlier slots, Full before Part.
// Costs within rounding of each other count as ties, so the choice does not
// depend on the order in which partial sums were formed.
bool better(const Candidate& a, const Candidate& b) {
    const double tol = 1e-9 * std::max({1.0, std::abs(a.cost), std::abs(b.cost)});
    if (std::abs(a.cost - b.cost) > tol) return a.cost < b.cost;
    if (a.entries.size() != b.entries.size()) return a.entries.size() < b.entries.size();
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const auto& x = a.entries[i];
        const auto& y = b.entries[i];
        if (x.slot != y.slot) return x.slot < y.slot;
        if (x.mode != y.mode) return x.mode == TxMode::Full;
    }
    return false;
}

double quality(const std::vector<double>& L, int gap) {
    if (L.empty()) return 0.0;
    return L[static_cast<std::size_t>(std::min<int>(gap, static_cast<int>(L.size()) - 1))];
}

double mode_cost(TxMode m, double snr, const PlannerParams& p) {
    if (m == TxMode::Full) return snr >= p.theta_full_db ? p.lambda_full : p.infeasible_penalty;
    return snr >= p.theta_part_db ? p.lambda_part : p.infeasible_penalty;
}

bool all_infeasible(const std::vector<double>& snr_db, const PlannerParams& p) {
    if (snr_db.size() < 2) return false;
    return std::all_of(snr_db.begin() + 1, snr_db.end(), [&](double s) { return s < p.theta_part_db; });
}

SchedulerPlan finish(Candidate c, const std::vector<double>& snr_db, const PlannerParams& p) {
    SchedulerPlan plan;
    plan.entries = std::move(c.entries);
    plan.objective_value = c.cost;
    plan.infeasible = all_infeasible(snr_db, p);
    return plan;
}

constexpr TxMode kModes[] = {TxMode::Full, TxMode::Part};

} // namespace

void PlannerParams::validate() const {
    if (!(lambda_part > 0.0) || !(lambda_full > lambda_part)) {
        throw ConfigError("planner lambdas must satisfy lambda_full > lambda_part > 0");
    }
    if (theta_full_db < theta_part_db) throw ConfigError("theta_full_db must be >= theta_part_db");
    if (!(infeasible_penalty > 0.0)) throw ConfigError("infeasible_penalty must be positive");
}

bool SchedulerPlan::contains(int slot) const {
    return std::any_of(entries.begin(), entries.end(), [&](const PlanEntry& e) { return e.slot == slot; });
}

std::vector<int> SchedulerPlan::slots() const {
    std::vector<int> out;
    for (const auto& e : entries) out.push_back(e.slot);
    return out;
}

SchedulerPlan plan_active(const std::vector<double>& snr_db, const std::vector<double>& L,
                          const PlannerParams& params) {
    params.validate();
    const int T = snr_db.empty() ? 0 : static_cast<int>(snr_db.size()) - 1;
    if (T == 0) return {};

    // best[g]: cheapest path through the current slot that ends with gap g.
    std::vector<std::optional<Candidate>> best(static_cast<std::size_t>(T) + 1);
    best[0] = Candidate{};
    for (int t = 1; t <= T; ++t) {
        std::vector<std::optional<Candidate>> next(best.size());
        auto offer = [&](int g, Candidate c) {
            auto& slot = next[static_cast<std::size_t>(g)];
            if (!slot || better(c, *slot)) slot = std::move(c);
        };
        for (int g = 0; g < t; ++g) {
            const auto& cur = best[static_cast<std::size_t>(g)];
            if (!cur) continue;
            Candidate idle = *cur;
            idle.cost = cur->cost + quality(L, g + 1);
            offer(g + 1, std::move(idle));
            for (TxMode m : kModes) {
                Candidate tx = *cur;
                tx.cost = cur->cost + (quality(L, 0) + mode_cost(m, snr_db[static_cast<std::size_t>(t)], params));
                tx.entries.push_back({t, m});
                offer(0, std::move(tx));
            }
        }
        best = std::move(next);
    }
    std::optional<Candidate> winner;
    for (auto& c : best) {
        if (c && (!winner || better(*c, *winner))) winner = std::move(c);
    }
    return finish(std::move(*winner), snr_db, params);
}

SchedulerPlan exhaustive_oracle(const std::vector<double>& snr_db, const std::vector<double>& L,
                                const PlannerParams& params) {
    params.validate();
    const int T = snr_db.empty() ? 0 : static_cast<int>(snr_db.size()) - 1;
    if (T == 0) return {};
    if (T > 22) throw InputError("exhaustive_oracle: horizon too long for enumeration");
    const bool non_negative = std::all_of(L.begin(), L.end(), [](double v) { return v >= 0.0; });

    std::optional<Candidate> incumbent;
    Candidate path;
    auto dfs = [&](auto&& self, int t, int gap) -> void {
        if (non_negative && incumbent && path.cost > incumbent->cost) return;
        if (t > T) {
            if (!incumbent || better(path, *incumbent)) incumbent = path;
            return;
        }
        const double before = path.cost;
        for (TxMode m : kModes) {
            path.cost = before + (quality(L, 0) + mode_cost(m, snr_db[static_cast<std::size_t>(t)], params));
            path.entries.push_back({t, m});
            self(self, t + 1, 0);
            path.entries.pop_back();
        }
        path.cost = before + quality(L, gap + 1);
        self(self, t + 1, gap + 1);
        path.cost = before;
    };
    dfs(dfs, 1, 0);
    return finish(std::move(*incumbent), snr_db, params);
}

double evaluate_plan(const std::vector<double>& snr_db, const std::vector<double>& L,
                     const PlannerParams& params, const std::vector<int>& slots) {
    const int T = snr_db.empty() ? 0 : static_cast<int>(snr_db.size()) - 1;
    double cost = 0.0;
    int gap = 0;
    for (int t = 1; t <= T; ++t) {
        if (std::find(slots.begin(), slots.end(), t) != slots.end()) {
            const double snr = snr_db[static_cast<std::size_t>(t)];
            const double c = std::min(mode_cost(TxMode::Full, snr, params), mode_cost(TxMode::Part, snr, params));
            cost = cost + (quality(L, 0) + c);
            gap = 0;
        } else {
            ++gap;
            cost = cost + quality(L, gap);
        }
    }
    return cost;
}

std::vector<int> fixed_interval_slots(int num_slots, int k) {
    if (k < 1) throw InputError("fixed interval must be at least 1");
    std::vector<int> out;
    for (int t = k; t <= num_slots; t += k) out.push_back(t);
    return out;
}

bool merge_runtime(const SchedulerPlan& plan, bool feedback_requested, int slot) {
    return feedback_requested || plan.contains(slot);
}

std::string plan_to_json(const SchedulerPlan& plan, const PlannerParams& params) {
    nlohmann::ordered_json j;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : plan.entries) {
        j["entries"].push_back({{"slot", e.slot}, {"mode", to_string(e.mode)}});
    }
    j["objective"] = plan.objective_value;
    j["infeasible"] = plan.infeasible;
    j["params"] = {{"lambda_full", params.lambda_full},
                   {"lambda_part", params.lambda_part},
                   {"theta_full_db", params.theta_full_db},
                   {"theta_part_db", params.theta_part_db},
                   {"infeasible_penalty", params.infeasible_penalty}};
    return j.dump(2) + "\n";
}

SchedulerPlan plan_from_json(const std::string& text) {
    SchedulerPlan plan;
    try {
        const auto j = nlohmann::json::parse(text);
        for (const auto& e : j.at("entries")) {
            plan.entries.push_back({e.at("slot").get<int>(), tx_mode_from_string(e.at("mode").get<std::string>())});
        }
        plan.objective_value = j.at("objective").get<double>();
        plan.infeasible = j.value("infeasible", false);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed plan JSON: ") + e.what());
    }
    for (std::size_t i = 0; i < plan.entries.size(); ++i) {
        const auto& e = plan.entries[i];
        if (e.slot < 1 || e.mode == TxMode::Predict || (i > 0 && plan.entries[i - 1].slot >= e.slot)) {
            throw InputError("plan entries must be Full/Part at strictly increasing slots >= 1");
        }
    }
    return plan;
}

} // namespace semtx::scheduler
