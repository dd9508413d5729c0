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

#include "semtx/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "semtx/errors.hpp"
#include "semtx/metrics.hpp"
#include "semtx/phy.hpp"
#include "semtx/predictor.hpp"
#include "semtx/rng.hpp"

namespace semtx::experiment {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw InvariantViolation("missing output file: " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file: " + p.string());
    f << text;
}

std::string trace_name(std::uint64_t seed) { return "trace_seed" + std::to_string(seed) + ".csv"; }

SeedResult summarize(protocol::SessionTrace trace) {
    SeedResult r;
    r.seed = trace.seed;
    r.totals = protocol::ledger_totals(trace);
    const double n = static_cast<double>(trace.slots.size());
    for (const auto& s : trace.slots) {
        r.mean_mse += s.mse / n;
        r.mean_miou += s.miou / n;
        r.mean_delta += s.delta_exceed / n;
    }
    r.mean_psnr_db = metrics::psnr_from_mse(r.mean_mse);
    r.trace = std::move(trace);
    return r;
}

ojson psnr_json(double v) { return std::isinf(v) ? ojson("inf") : ojson(v); }

// Runs fn(i) for i in [0, n) on up to `parallel` threads and rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, int parallel, Fn fn) {
    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(parallel, 1)), 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace

std::vector<double> actual_snr(const config::ExperimentConfig& cfg) {
    if (cfg.channel_mode == config::ChannelMode::Trajectory) {
        return channel::snr_trace(cfg.trajectory(), cfg.base_stations, cfg.radio, cfg.blockages).snr_db;
    }
    std::vector<double> snr = channel::fixed_snr(cfg.fixed_snr_db, cfg.num_slots).snr_db;
    for (int t = 0; t <= cfg.num_slots; ++t) {
        for (const auto& b : cfg.blockages) {
            if (b.covers(t)) snr[static_cast<std::size_t>(t)] -= b.extra_loss_db;
        }
    }
    return snr;
}

std::vector<double> forecast_snr(const config::ExperimentConfig& cfg) {
    config::ExperimentConfig f = cfg;
    f.blockages = cfg.blockages_forecast;
    return actual_snr(f);
}

std::vector<double> planning_reference(const config::ExperimentConfig& cfg) {
    std::vector<double> L = predictor::degradation_reference(cfg.profile, cfg.num_slots, cfg.reference_seeds, 0);
    const double peak = *std::max_element(L.begin(), L.end());
    if (peak > 0.0) {
        for (double& v : L) v /= peak;
    }
    return L;
}

scheduler::SchedulerPlan make_plan(const config::ExperimentConfig& cfg) {
    return scheduler::plan_active(forecast_snr(cfg), planning_reference(cfg), cfg.planner);
}

protocol::SessionInputs session_inputs(const config::ExperimentConfig& cfg, std::uint64_t seed,
                                       const scheduler::SchedulerPlan& plan) {
    protocol::SessionInputs in;
    in.scenario = cfg.scenario;
    in.snr_db = actual_snr(cfg);
    in.config = cfg.protocol;
    in.profile = cfg.profile;
    in.link = cfg.link;
    in.plan = plan;
    in.seed = seed;
    return in;
}

Stat stat(const std::vector<double>& values) {
    Stat s;
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(var / static_cast<double>(values.size()));
    return s;
}

RunSummary run(const config::ExperimentConfig& cfg, int parallel) {
    cfg.validate();
    const scheduler::SchedulerPlan plan =
        cfg.protocol.strategy == protocol::Strategy::FeedbackActive ? make_plan(cfg) : scheduler::SchedulerPlan{};

    RunSummary out;
    out.config_text = config::serialize(cfg);
    out.per_seed.resize(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), parallel, [&](std::size_t i) {
        out.per_seed[i] = summarize(protocol::run_session(session_inputs(cfg, cfg.seeds[i], plan)));
    });

    std::vector<double> mse, psnr, miou, fwd, fb, tx, trig;
    for (const auto& r : out.per_seed) {
        mse.push_back(r.mean_mse);
        if (std::isfinite(r.mean_psnr_db)) psnr.push_back(r.mean_psnr_db);
        miou.push_back(r.mean_miou);
        fwd.push_back(static_cast<double>(r.totals.forward_bytes));
        fb.push_back(static_cast<double>(r.totals.feedback_bytes));
        tx.push_back(r.totals.transmission_count);
        trig.push_back(r.totals.feedback_triggered);
    }
    out.mse = stat(mse);
    out.psnr_db = stat(psnr);
    out.miou = stat(miou);
    out.forward_bytes = stat(fwd);
    out.feedback_bytes = stat(fb);
    out.transmissions = stat(tx);
    out.feedback_triggered = stat(trig);
    return out;
}

std::string summary_to_json(const RunSummary& s) {
    ojson j;
    j["seed_count"] = s.per_seed.size();
    j["seeds"] = ojson::array();
    for (const auto& r : s.per_seed) j["seeds"].push_back(r.seed);
    j["num_slots"] = s.per_seed.empty() ? 0 : s.per_seed.front().trace.slots.size() - 1;

    std::size_t fwd = 0, fb = 0, ledger = 0;
    long long tx = 0;
    j["per_seed"] = ojson::array();
    for (const auto& r : s.per_seed) {
        std::size_t raw_forward = 0;
        for (const auto& slot : r.trace.slots) raw_forward += slot.ledger.forward_bytes;
        fwd += raw_forward;
        fb += r.totals.feedback_bytes;
        ledger += r.totals.forward_bytes;
        tx += r.totals.transmission_count;
        j["per_seed"].push_back({{"seed", r.seed},
                                 {"forward_bytes", raw_forward},
                                 {"feedback_bytes", r.totals.feedback_bytes},
                                 {"ledger_bytes", r.totals.forward_bytes},
                                 {"transmissions", r.totals.transmission_count},
                                 {"full", r.totals.full_count},
                                 {"part", r.totals.part_count},
                                 {"feedback_triggered", r.totals.feedback_triggered},
                                 {"schedule_triggered", r.totals.schedule_triggered},
                                 {"deferred", r.totals.deferred},
                                 {"mean_mse", r.mean_mse},
                                 {"mean_psnr_db", psnr_json(r.mean_psnr_db)},
                                 {"mean_miou", r.mean_miou},
                                 {"mean_delta_exceed", r.mean_delta}});
    }
    j["totals"] = {{"forward_bytes", fwd}, {"feedback_bytes", fb}, {"ledger_bytes", ledger}, {"transmissions", tx}};
    auto st = [](const Stat& x) { return ojson{{"mean", x.mean}, {"std", x.std}}; };
    j["stats"] = {{"mse", st(s.mse)},
                  {"psnr_db", st(s.psnr_db)},
                  {"miou", st(s.miou)},
                  {"ledger_bytes", st(s.forward_bytes)},
                  {"feedback_bytes", st(s.feedback_bytes)},
                  {"transmissions", st(s.transmissions)},
                  {"feedback_triggered", st(s.feedback_triggered)}};
    std::size_t finite = 0;
    for (const auto& r : s.per_seed) finite += std::isfinite(r.mean_psnr_db) ? 1 : 0;
    j["psnr_finite_seeds"] = finite;
    j["config"] = s.config_text;
    return j.dump(2) + "\n";
}

void write_outputs(const RunSummary& s, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
    for (const auto& r : s.per_seed) write_file(fs::path(dir) / trace_name(r.seed), protocol::trace_to_csv(r.trace));
    write_file(fs::path(dir) / "summary.json", summary_to_json(s));
}

void verify_outputs(const std::string& dir) {
    ojson j;
    try {
        j = ojson::parse(read_file(fs::path(dir) / "summary.json"));
    } catch (const nlohmann::json::exception& e) {
        throw InvariantViolation(std::string("summary.json does not parse: ") + e.what());
    }
    const std::size_t rows_expected = j.at("num_slots").get<std::size_t>() + 1;
    std::size_t fwd_total = 0, fb_total = 0;
    for (const auto& entry : j.at("per_seed")) {
        const auto seed = entry.at("seed").get<std::uint64_t>();
        std::istringstream csv(read_file(fs::path(dir) / trace_name(seed)));
        std::string line;
        std::getline(csv, line);
        std::size_t rows = 0, fwd = 0, fb = 0;
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cols;
            std::string cell;
            std::istringstream ls(line);
            while (std::getline(ls, cell, ',')) cols.push_back(cell);
            if (cols.size() != 10) throw InvariantViolation("trace row with wrong column count for seed " + std::to_string(seed));
            fwd += std::stoull(cols[4]);
            fb += std::stoull(cols[5]);
            ++rows;
        }
        if (rows != rows_expected) throw InvariantViolation("trace row count differs from num_slots + 1");
        if (fwd != entry.at("forward_bytes").get<std::size_t>() || fb != entry.at("feedback_bytes").get<std::size_t>()) {
            throw InvariantViolation("summary byte totals differ from the CSV columns for seed " + std::to_string(seed));
        }
        fwd_total += fwd;
        fb_total += fb;
    }
    if (fwd_total != j.at("totals").at("forward_bytes").get<std::size_t>() ||
        fb_total != j.at("totals").at("feedback_bytes").get<std::size_t>()) {
        throw InvariantViolation("summary totals differ from the CSV column sums");
    }
}

std::string sweep_snr(const config::ExperimentConfig& cfg, const std::vector<double>& snr_list, int parallel) {
    std::string out =
        "snr_db,seeds,mse_mean,mse_std,psnr_db_mean,miou_mean,ledger_bytes_mean,feedback_bytes_mean,"
        "transmissions_mean,feedback_triggered_mean\n";
    for (double snr : snr_list) {
        config::ExperimentConfig c = cfg;
        c.channel_mode = config::ChannelMode::Fixed;
        c.fixed_snr_db = snr;
        const RunSummary s = run(c, parallel);
        out += num(snr) + ',' + std::to_string(s.per_seed.size()) + ',' + num(s.mse.mean) + ',' + num(s.mse.std) +
               ',' + num(s.psnr_db.mean) + ',' + num(s.miou.mean) + ',' + num(s.forward_bytes.mean) + ',' +
               num(s.feedback_bytes.mean) + ',' + num(s.transmissions.mean) + ',' + num(s.feedback_triggered.mean) +
               '\n';
    }
    return out;
}

std::vector<StrategyRow> strategy_table(const config::ExperimentConfig& cfg, int parallel) {
    std::vector<StrategyRow> rows;
    for (protocol::Strategy st :
         {protocol::Strategy::FeedbackFull, protocol::Strategy::FeedbackPart, protocol::Strategy::FixedInterval}) {
        for (double snr : {0.0, 5.0, 10.0}) {
            config::ExperimentConfig c = cfg;
            c.channel_mode = config::ChannelMode::Fixed;
            c.fixed_snr_db = snr;
            c.protocol.strategy = st;
            const RunSummary s = run(c, parallel);
            StrategyRow row;
            row.strategy = st;
            row.snr_db = snr;
            row.seeds = static_cast<int>(s.per_seed.size());
            for (const auto& r : s.per_seed) {
                row.forward_bytes_total += r.totals.forward_bytes;
                row.transmissions_total += r.totals.transmission_count;
                row.mean_mse += r.mean_mse;
            }
            const double n = row.seeds;
            row.times = static_cast<double>(row.transmissions_total - row.seeds) / n;
            row.kbytes = static_cast<double>(row.forward_bytes_total) / 1024.0 / n;
            row.mean_mse /= n;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string strategy_table_to_csv(const std::vector<StrategyRow>& rows) {
    std::string out = "strategy,snr_db,seeds,times,kbytes,mean_mse\n";
    for (const auto& r : rows) {
        out += protocol::to_string(r.strategy) + ',' + num(r.snr_db) + ',' + std::to_string(r.seeds) + ',' +
               num(r.times) + ',' + num(r.kbytes) + ',' + num(r.mean_mse) + '\n';
    }
    return out;
}

BerRow ber_point(double es_n0_db, std::uint64_t bits, std::uint64_t seed) {
    if (bits == 0) throw InputError("ber_point: need at least one bit");
    Rng rng = make_rng(seed, Stream::ForwardLink);
    std::uniform_int_distribution<int> byte(0, 255);
    const phy::LinkConfig link; // unit-flat, perfect estimation
    BerRow row;
    row.es_n0_db = es_n0_db;
    row.analytic = phy::qam16_ber_awgn(es_n0_db);
    const std::uint64_t chunk_bytes = 4096;
    const std::uint64_t total_bytes = (bits + 7) / 8;
    std::vector<std::uint8_t> payload;
    for (std::uint64_t done = 0; done < total_bytes; done += chunk_bytes) {
        payload.resize(static_cast<std::size_t>(std::min(chunk_bytes, total_bytes - done)));
        for (auto& b : payload) b = static_cast<std::uint8_t>(byte(rng));
        const phy::TransmitResult tx = phy::transmit_bytes(payload, es_n0_db, link, rng);
        row.bits += tx.report.bits_sent;
        row.errors += tx.report.bit_errors;
    }
    row.measured = static_cast<double>(row.errors) / static_cast<double>(row.bits);
    return row;
}

std::string ber_table_to_csv(const std::vector<BerRow>& rows) {
    std::string out = "es_n0_db,bits,errors,measured_ber,analytic_ber\n";
    for (const auto& r : rows) {
        out += num(r.es_n0_db) + ',' + std::to_string(r.bits) + ',' + std::to_string(r.errors) + ',' +
               num(r.measured) + ',' + num(r.analytic) + '\n';
    }
    return out;
}

} // namespace semtx::experiment
