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

#include "semtx/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "semtx/config.hpp"
#include "semtx/errors.hpp"
#include "semtx/experiment.hpp"
#include "semtx/scheduler.hpp"

namespace semtx::cli {

namespace {

namespace fs = std::filesystem;

struct SeedOptions {
    int count = 0;
    std::string list;
};

void add_seed_options(CLI::App* cmd, SeedOptions& s) {
    auto* n = cmd->add_option("--seeds", s.count, "Run seeds 0..N-1")->check(CLI::PositiveNumber);
    auto* l = cmd->add_option("--seed-list", s.list, "Explicit seeds, e.g. 3,5,10-19");
    n->excludes(l);
}

void apply_seeds(config::ExperimentConfig& cfg, const SeedOptions& s) {
    if (s.count > 0) {
        cfg.seeds.resize(static_cast<std::size_t>(s.count));
        std::iota(cfg.seeds.begin(), cfg.seeds.end(), std::uint64_t{0});
    } else if (!s.list.empty()) {
        cfg.seeds = config::parse_seeds(s.list);
    }
}

std::vector<double> parse_snr_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--snr-list: not a number: '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("--snr-list: empty list");
    return out;
}

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (fs::path(dir) / name).string());
    f << text;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Predictive semantic video transmission simulator", "semtx"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string snr_list;
    int parallel = 1;
    std::uint64_t bits = 1000000;
    std::uint64_t ber_seed = 0;
    SeedOptions seeds;

    auto* simulate = app.add_subcommand("simulate", "Run the configured sessions and write traces");
    auto* sweep = app.add_subcommand("sweep-snr", "Summaries over a list of fixed SNR values");
    auto* plan = app.add_subcommand("plan", "Active transmission plan for the configured forecast");
    auto* ber = app.add_subcommand("ber-check", "Measured vs analytic 16-QAM bit error rate");
    auto* table = app.add_subcommand("strategy-table", "Transmissions, kilobytes and MSE per strategy at 0, 5 and 10 dB");

    for (auto* cmd : {simulate, sweep, plan, table}) {
        cmd->add_option("--config", config_path, "Experiment config file")->required();
        cmd->add_option("--out", out_dir, "Output directory (defaults to output.dir)");
    }
    for (auto* cmd : {simulate, sweep, table}) {
        add_seed_options(cmd, seeds);
        cmd->add_option("--parallel", parallel, "Concurrent sessions")->check(CLI::PositiveNumber);
    }
    sweep->add_option("--snr-list", snr_list, "Comma-separated SNR values in dB")->required();
    ber->add_option("--snr-list", snr_list, "Comma-separated Es/N0 values in dB")->default_val("6,10,14");
    ber->add_option("--bits", bits, "Bits per point")->check(CLI::PositiveNumber);
    ber->add_option("--seed", ber_seed, "Noise seed");
    ber->add_option("--out", out_dir, "Optional output directory for ber.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*ber) {
            std::vector<experiment::BerRow> rows;
            for (double snr : parse_snr_list(snr_list)) rows.push_back(experiment::ber_point(snr, bits, ber_seed));
            const std::string csv = experiment::ber_table_to_csv(rows);
            out << csv;
            if (!out_dir.empty()) write_text(out_dir, "ber.csv", csv);
            return kExitOk;
        }

        config::ExperimentConfig cfg = config::load(config_path);
        apply_seeds(cfg, seeds);
        if (out_dir.empty()) out_dir = cfg.output_dir;
        cfg.validate();

        if (*simulate) {
            const experiment::RunSummary s = experiment::run(cfg, parallel);
            experiment::write_outputs(s, out_dir);
            experiment::verify_outputs(out_dir);
            out << "seeds " << s.per_seed.size() << "\n"
                << "mse " << s.mse.mean << " +- " << s.mse.std << "\n"
                << "miou " << s.miou.mean << " +- " << s.miou.std << "\n"
                << "ledger_bytes " << s.forward_bytes.mean << " +- " << s.forward_bytes.std << "\n"
                << "transmissions " << s.transmissions.mean << " +- " << s.transmissions.std << "\n";
        } else if (*sweep) {
            const std::string csv = experiment::sweep_snr(cfg, parse_snr_list(snr_list), parallel);
            write_text(out_dir, "sweep.csv", csv);
            out << csv;
        } else if (*plan) {
            const scheduler::SchedulerPlan p = experiment::make_plan(cfg);
            write_text(out_dir, "plan.json", scheduler::plan_to_json(p, cfg.planner));
            out << "planned slots:";
            for (const auto& e : p.entries) out << ' ' << e.slot << '(' << to_string(e.mode) << ')';
            out << "\nobjective " << p.objective_value << (p.infeasible ? " (infeasible horizon)" : "") << "\n";
        } else if (*table) {
            const std::string csv = experiment::strategy_table_to_csv(experiment::strategy_table(cfg, parallel));
            write_text(out_dir, "strategies.csv", csv);
            out << csv;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

} // namespace semtx::cli
