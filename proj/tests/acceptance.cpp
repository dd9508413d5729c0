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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "semtx/channel.hpp"
#include "semtx/cli.hpp"
#include "semtx/config.hpp"
#include "semtx/experiment.hpp"
#include "semtx/phy.hpp"
#include "semtx/predictor.hpp"
#include "semtx/protocol.hpp"
#include "semtx/scheduler.hpp"

using namespace semtx;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [violated]");
    }
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string config_dir() {
    const char* d = std::getenv("SEMTX_CONFIG_DIR");
    return d ? d : "configs";
}

config::ExperimentConfig load_config(const std::string& name) {
    return config::load(config_dir() + "/" + name);
}

// 1. Radio closed forms.
Outcome radio() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const channel::RadioParams r;
    const double l1000 = channel::path_loss_db(1000.0, r);
    const double l100 = channel::path_loss_db(100.0, r);
    const double a = channel::mobile_correction(1.5);
    const double n0 = channel::noise_floor_dbm(2.0e7);
    o.require(std::abs(l1000 - 144.386) <= 0.01, "L(1000 m)=" + fmt(l1000));
    o.require(std::abs(l100 - 106.036) <= 0.01, "L(100 m)=" + fmt(l100));
    o.require(std::abs(a + 0.00068) <= 0.01, "a(1.5)=" + fmt(a));
    o.require(std::abs(n0 + 100.990) <= 0.01, "N0=" + fmt(n0));
    const double dt = seconds_since(t0);
    o.require(dt < 1.0, "time " + fmt(dt, 3) + " s");
    return o;
}

// 2. Measured vs analytic 16-QAM BER.
Outcome ber() {
    Outcome o;
    for (double snr : {6.0, 10.0, 14.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto row = experiment::ber_point(snr, 1000000, 1);
        const double dt = seconds_since(t0);
        const double rel = std::abs(row.measured - row.analytic) / row.analytic;
        o.require(rel <= 0.10 && row.bits >= 1000000 && dt < 10.0,
                  fmt(snr, 3) + " dB: " + fmt(row.measured, 4) + " vs " + fmt(row.analytic, 4) + " (" +
                      fmt(dt, 2) + " s)");
    }
    return o;
}

protocol::SessionTrace modes_trace(int full, int part) {
    protocol::SessionTrace t;
    for (int i = 0; i < full + part; ++i) {
        protocol::SlotRecord r;
        r.ledger.slot = i;
        r.ledger.mode = i < full ? TxMode::Full : TxMode::Part;
        r.ledger.forward_bytes = i < full ? 2048 : 512;
        t.slots.push_back(r);
    }
    return t;
}

// 3. Ledger arithmetic and trigger-count monotonicity.
Outcome ledger() {
    Outcome o;
    const std::vector<std::pair<std::pair<int, int>, std::size_t>> cases{
        {{1, 4}, 4096}, {{1, 6}, 5120}, {{1, 10}, 7168}, {{13, 0}, 26624}};
    for (const auto& [fp, want] : cases) {
        const std::size_t got = protocol::ledger_totals(modes_trace(fp.first, fp.second)).forward_bytes;
        o.require(got == want, std::to_string(fp.first) + "F+" + std::to_string(fp.second) + "P=" +
                                   std::to_string(got));
    }
    config::ExperimentConfig cfg = load_config("basic.conf");
    cfg.seeds.clear();
    for (std::uint64_t s = 0; s < 20; ++s) cfg.seeds.push_back(s);
    double prev = INFINITY;
    std::string counts;
    for (double snr : {0.0, 5.0, 10.0}) {
        cfg.fixed_snr_db = snr;
        const auto summary = experiment::run(cfg, 4);
        const double m = summary.feedback_triggered.mean;
        counts += (counts.empty() ? "" : " ") + fmt(m, 4);
        if (m > prev) o.pass = false;
        prev = m;
    }
    o.require(o.pass, "feedback triggers at 0/5/10 dB: " + counts);
    return o;
}

// 4. Delta metric and feedback determinism.
Outcome delta() {
    Outcome o;
    Grid<double> a(16, 8, 10.0), scaled(16, 8, 13.0), half = a;
    for (int x = 0; x < 16; ++x) {
        for (int y = 0; y < 4; ++y) half(x, y) = 13.0;
    }
    o.require(protocol::delta_exceed(a, a) == 0.0, "identical 0");
    o.require(protocol::delta_exceed(a, scaled) == 1.0, "scaled 1");
    o.require(protocol::delta_exceed(a, half) == 0.5, "half 0.5");

    // Scripted drift: deterministic bias only, noiseless links. Compare the
    // first non-initial transmission with the slot where delta first exceeds sigma.
    int checked = 0, matched = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        protocol::SessionInputs in;
        in.scenario = world::Scenario::Basic;
        in.snr_db.assign(21, 200.0);
        in.config.strategy = protocol::Strategy::FeedbackPart;
        in.profile = predictor::DegradationProfile::exact(in.scenario);
        in.profile.velocity_bias_frac = 1.0;
        in.seed = seed;
        // The prediction-only run exposes the uncorrected drift the feedback sees.
        protocol::SessionInputs drift = in;
        drift.config.strategy = protocol::Strategy::FeedbackActive;
        drift.config.sigma = 0.99;
        const auto free_run = protocol::run_session(drift);
        int k = -1;
        for (std::size_t t = 1; t < free_run.slots.size(); ++t) {
            if (free_run.slots[t].feedback_delta > 0.3) {
                k = static_cast<int>(t);
                break;
            }
        }
        if (k < 0) continue;
        const auto trace = protocol::run_session(in);
        int first = -1;
        for (std::size_t t = 1; t < trace.slots.size(); ++t) {
            if (trace.slots[t].ledger.mode != TxMode::Predict) {
                first = static_cast<int>(t);
                break;
            }
        }
        ++checked;
        if (first == k) ++matched;
    }
    o.require(checked > 0 && matched == checked,
              "drift crossing matched " + std::to_string(matched) + "/" + std::to_string(checked) + " seeds");
    return o;
}

// 5. Planner optimality and handover bracketing.
Outcome scheduler_check() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> snr_d(-6.0, 12.0), inc(0.0, 1.5), lam(0.5, 4.0);
    int exact = 0;
    for (int k = 0; k < 200; ++k) {
        const int T = 1 + k % 12;
        std::vector<double> snr(static_cast<std::size_t>(T) + 1), L(static_cast<std::size_t>(T) + 1, 0.0);
        for (auto& s : snr) s = snr_d(gen);
        for (std::size_t i = 1; i < L.size(); ++i) L[i] = L[i - 1] + inc(gen);
        scheduler::PlannerParams p;
        p.lambda_part = lam(gen);
        p.lambda_full = p.lambda_part + lam(gen);
        const auto dp = scheduler::plan_active(snr, L, p);
        const auto ex = scheduler::exhaustive_oracle(snr, L, p);
        if (dp.objective_value == ex.objective_value) ++exact;
    }
    const double dt = seconds_since(t0);
    o.require(exact == 200 && dt < 60.0, std::to_string(exact) + "/200 exact in " + fmt(dt, 3) + " s");

    const auto cfg = load_config("handover.conf");
    const auto snr = experiment::forecast_snr(cfg);
    const auto plan = experiment::make_plan(cfg);
    std::string slots;
    bool in_dip = false, near7 = false, near14 = false;
    for (const auto& e : plan.entries) {
        slots += (slots.empty() ? "" : ",") + std::to_string(e.slot);
        if (snr[static_cast<std::size_t>(e.slot)] < cfg.planner.theta_part_db) in_dip = true;
        if (std::abs(e.slot - 7) <= 1) near7 = true;
        if (std::abs(e.slot - 14) <= 1) near14 = true;
    }
    o.require(!in_dip && near7 && near14, "handover plan {" + slots + "}");
    return o;
}

// 6. Degradation ordering and the square-root drift law.
Outcome degradation() {
    Outcome o;
    const int horizon = 6, seeds = 200;
    const auto basic = predictor::degradation_reference(
        predictor::DegradationProfile::defaults(world::Scenario::Basic), horizon, seeds);
    const auto busy = predictor::degradation_reference(
        predictor::DegradationProfile::defaults(world::Scenario::Busy), horizon, seeds);
    const auto cross = predictor::degradation_reference(
        predictor::DegradationProfile::defaults(world::Scenario::Crossroad), horizon, seeds, world::kYawStartSlot);
    const double lb = basic[horizon], lu = busy[horizon], lc = cross[horizon];
    o.require(lb < lu, "basic " + fmt(lb, 4) + " < busy " + fmt(lu, 4));
    o.require(lb < lc, "basic < crossroad(yaw) " + fmt(lc, 4));

    predictor::DegradationProfile p = predictor::DegradationProfile::exact(world::Scenario::Busy);
    p.pos_noise_std_m_per_slot = predictor::DegradationProfile::defaults(world::Scenario::Busy).pos_noise_std_m_per_slot;
    const predictor::Guidance g{world::kCameraSpeed, world::Scenario::Busy};
    auto rms_at = [&](int k) {
        double sum = 0.0;
        long n = 0;
        for (std::uint64_t seed = 0; seed < 400; ++seed) {
            world::SceneState truth = world::scene_init(world::Scenario::Busy, seed);
            predictor::PredictorState ps = predictor::seed_exact(truth);
            Rng rng = make_rng(seed, Stream::Reference);
            for (int t = 0; t < k; ++t) {
                truth = world::scene_step(truth);
                ps = predictor::advance(ps, g, p, rng);
            }
            for (std::size_t i = 0; i < truth.objects.size(); ++i) {
                const double dx = ps.believed.objects[i].center.x - truth.objects[i].center.x;
                const double dy = ps.believed.objects[i].center.y - truth.objects[i].center.y;
                sum += dx * dx + dy * dy;
                n += 2;
            }
        }
        return std::sqrt(sum / static_cast<double>(n));
    };
    const double sigma = p.pos_noise_std_m_per_slot;
    bool law = true;
    std::string rms;
    for (int k : {1, 4, 9, 16}) {
        const double r = rms_at(k);
        const double want = sigma * std::sqrt(k);
        law = law && std::abs(r - want) <= 0.2 * want;
        rms += (rms.empty() ? "" : " ") + fmt(r / want, 3);
    }
    o.require(law, "rms/(sigma*sqrt k) at k=1,4,9,16: " + rms);
    return o;
}

double mean_mse(const experiment::RunSummary& s) { return s.mse.mean; }

// 7. End-to-end orderings, paired over seeds.
Outcome dominance() {
    Outcome o;
    const int seeds = 20;
    config::ExperimentConfig basic = load_config("basic.conf");
    basic.fixed_snr_db = 5.0;
    basic.seeds.clear();
    for (int s = 0; s < seeds; ++s) basic.seeds.push_back(static_cast<std::uint64_t>(s));
    basic.protocol.strategy = protocol::Strategy::FeedbackPart;
    const auto part = experiment::run(basic, 4);
    basic.protocol.strategy = protocol::Strategy::PredictOnly;
    const auto pred = experiment::run(basic, 4);
    int wins = 0;
    for (int i = 0; i < seeds; ++i) wins += part.per_seed[i].mean_mse <= pred.per_seed[i].mean_mse;
    o.require(mean_mse(part) <= mean_mse(pred), "5 dB feedback_part " + fmt(mean_mse(part), 5) +
                                                    " <= prediction " + fmt(mean_mse(pred), 5) + " (" +
                                                    std::to_string(wins) + "/20 seeds)");

    config::ExperimentConfig ho = load_config("handover.conf");
    ho.seeds = basic.seeds;
    ho.protocol.strategy = protocol::Strategy::FeedbackActive;
    const auto active = experiment::run(ho, 4);
    ho.protocol.strategy = protocol::Strategy::FeedbackPart;
    const auto hpart = experiment::run(ho, 4);
    wins = 0;
    for (int i = 0; i < seeds; ++i) wins += active.per_seed[i].mean_mse <= hpart.per_seed[i].mean_mse;
    o.require(mean_mse(active) <= mean_mse(hpart), "handover feedback_active " + fmt(mean_mse(active), 5) +
                                                       " <= feedback_part " + fmt(mean_mse(hpart), 5) + " (" +
                                                       std::to_string(wins) + "/20 seeds)");
    return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    if (!fs::exists(dir)) return files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream f(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        files[fs::relative(e.path(), dir).string()] = ss.str();
    }
    return files;
}

// 8. Every CLI command twice into fresh directories.
Outcome reproducibility() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "semtx_acceptance_repro";
    fs::remove_all(root);
    const std::string conf = config_dir();
    const std::vector<std::vector<std::string>> commands{
        {"simulate", "--config", conf + "/basic.conf", "--seeds", "4", "--parallel", "2"},
        {"simulate", "--config", conf + "/blockage.conf", "--seeds", "3"},
        {"sweep-snr", "--config", conf + "/basic.conf", "--seeds", "3", "--snr-list", "0,10"},
        {"plan", "--config", conf + "/handover.conf"},
        {"ber-check", "--bits", "100000"},
        {"strategy-table", "--config", conf + "/basic.conf", "--seeds", "2", "--parallel", "3"},
    };
    int same = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::string outputs[2];
        std::map<std::string, std::string> files[2];
        bool ok = true;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path dir = root / (std::to_string(c) + "_" + std::to_string(rep));
            std::vector<std::string> args{"semtx"};
            args.insert(args.end(), commands[c].begin(), commands[c].end());
            args.push_back("--out");
            args.push_back(dir.string());
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            ok = ok && cli::run(static_cast<int>(argv.size()), argv.data(), out, err) == 0;
            outputs[rep] = out.str();
            files[rep] = snapshot(dir);
        }
        if (ok && outputs[0] == outputs[1] && files[0] == files[1] && !files[0].empty()) ++same;
        else o.require(false, commands[c][0] + " differs or failed");
    }
    fs::remove_all(root);
    o.require(same == static_cast<int>(commands.size()),
              std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical");
    return o;
}

} // namespace

// --known-failure N marks criterion N as a documented shortfall: it still
// prints [FAIL], but does not change the exit status.
int main(int argc, char** argv) {
    std::vector<std::size_t> known;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--known-failure" && i + 1 < argc) {
            known.push_back(static_cast<std::size_t>(std::stoul(argv[++i])));
        } else {
            std::cerr << "usage: semtx_acceptance [--known-failure N]...\n";
            return 2;
        }
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"radio closed forms", radio},
        {"16-QAM BER vs analytic", ber},
        {"ledger exactness and trigger monotonicity", ledger},
        {"delta metric and feedback determinism", delta},
        {"planner optimality and bracketing", scheduler_check},
        {"degradation ordering and sqrt-k law", degradation},
        {"end-to-end dominance", dominance},
        {"reproducibility", reproducibility},
    };
    int passed = 0, unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const bool is_known = std::find(known.begin(), known.end(), i + 1) != known.end();
        if (o.pass) ++passed;
        else if (!is_known) ++unexpected;
        std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
                  << o.detail << (!o.pass && is_known ? " (known failure)" : "") << std::endl;
    }
    std::cout << passed << "/" << criteria.size() << " criteria passed";
    if (passed + unexpected < static_cast<int>(criteria.size())) std::cout << ", remaining failures are known";
    std::cout << std::endl;
    return unexpected == 0 ? 0 : 1;
}
