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

#include "semtx/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "semtx/errors.hpp"

namespace semtx::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string fmt(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const std::string t = trim(v);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    return out;
}

long long to_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const std::string t = trim(v);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::pair<long long, long long> to_range(const std::string& key, const std::string& v) {
    const auto dash = v.find('-', 1);
    if (dash == std::string::npos) {
        const long long x = to_int(key, v);
        return {x, x};
    }
    return {to_int(key, v.substr(0, dash)), to_int(key, v.substr(dash + 1))};
}

channel::Position to_position(const std::string& key, const std::string& v) {
    const auto parts = split(v, ',');
    if (parts.size() != 2) throw ConfigError(key + ": expected 'x,y', got '" + v + "'");
    return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::string fmt_position(const channel::Position& p) { return fmt(p.x_m) + "," + fmt(p.y_m); }

std::vector<channel::BlockageEvent> to_blockages(const std::string& key, const std::string& v) {
    std::vector<channel::BlockageEvent> out;
    if (v.empty()) return out;
    for (const auto& item : split(v, ';')) {
        const auto at = item.find('@');
        if (at == std::string::npos) throw ConfigError(key + ": expected 'start-end@loss_db', got '" + item + "'");
        const auto [a, b] = to_range(key, item.substr(0, at));
        out.push_back({static_cast<int>(a), static_cast<int>(b), to_double(key, item.substr(at + 1))});
    }
    return out;
}

std::string fmt_blockages(const std::vector<channel::BlockageEvent>& v) {
    std::string out;
    for (const auto& b : v) {
        if (!out.empty()) out += ';';
        out += std::to_string(b.start_slot) + "-" + std::to_string(b.end_slot) + "@" + fmt(b.extra_loss_db);
    }
    return out;
}

struct Key {
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <class Sub>
Key num_key(Sub ExperimentConfig::*outer, double Sub::*inner, const std::string& name) {
    return {[=](ExperimentConfig& c, const std::string& v) { (c.*outer).*inner = to_double(name, v); },
            [=](const ExperimentConfig& c) { return fmt((c.*outer).*inner); }};
}

const std::map<std::string, Key>& table() {
    using C = ExperimentConfig;
    static const std::map<std::string, Key> keys = [] {
        std::map<std::string, Key> k;
        k["scenario"] = {[](C& c, const std::string& v) {
                             try {
                                 c.scenario = world::scenario_from_string(v);
                             } catch (const std::exception&) {
                                 throw ConfigError("scenario: unknown scenario '" + v + "'");
                             }
                         },
                         [](const C& c) { return world::to_string(c.scenario); }};
        k["session.num_slots"] = {[](C& c, const std::string& v) {
                                      c.num_slots = static_cast<int>(to_int("session.num_slots", v));
                                  },
                                  [](const C& c) { return std::to_string(c.num_slots); }};
        k["channel.mode"] = {[](C& c, const std::string& v) {
                                 if (v == "fixed") c.channel_mode = ChannelMode::Fixed;
                                 else if (v == "trajectory") c.channel_mode = ChannelMode::Trajectory;
                                 else throw ConfigError("channel.mode: expected fixed or trajectory");
                             },
                             [](const C& c) {
                                 return std::string(c.channel_mode == ChannelMode::Fixed ? "fixed" : "trajectory");
                             }};
        k["channel.fixed_snr_db"] = {[](C& c, const std::string& v) {
                                         c.fixed_snr_db = to_double("channel.fixed_snr_db", v);
                                     },
                                     [](const C& c) { return fmt(c.fixed_snr_db); }};
        k["channel.bs"] = {[](C& c, const std::string& v) {
                               c.base_stations.clear();
                               for (const auto& item : split(v, ';')) {
                                   c.base_stations.push_back(to_position("channel.bs", item));
                               }
                           },
                           [](const C& c) {
                               std::string out;
                               for (const auto& p : c.base_stations) {
                                   if (!out.empty()) out += ';';
                                   out += fmt_position(p);
                               }
                               return out;
                           }};
        k["channel.route_start"] = {[](C& c, const std::string& v) {
                                        c.route_start = to_position("channel.route_start", v);
                                    },
                                    [](const C& c) { return fmt_position(c.route_start); }};
        k["channel.route_end"] = {[](C& c, const std::string& v) {
                                      c.route_end = to_position("channel.route_end", v);
                                  },
                                  [](const C& c) { return fmt_position(c.route_end); }};
        k["channel.blockages"] = {[](C& c, const std::string& v) {
                                      c.blockages = to_blockages("channel.blockages", v);
                                  },
                                  [](const C& c) { return fmt_blockages(c.blockages); }};
        k["channel.blockages_forecast"] = {[](C& c, const std::string& v) {
                                               c.blockages_forecast = to_blockages("channel.blockages_forecast", v);
                                           },
                                           [](const C& c) { return fmt_blockages(c.blockages_forecast); }};

        k["radio.carrier_mhz"] = num_key(&C::radio, &channel::RadioParams::carrier_mhz, "radio.carrier_mhz");
        k["radio.tx_power_dbm"] = num_key(&C::radio, &channel::RadioParams::tx_power_dbm, "radio.tx_power_dbm");
        k["radio.antenna_gain_dbi"] =
            num_key(&C::radio, &channel::RadioParams::antenna_gain_dbi, "radio.antenna_gain_dbi");
        k["radio.bandwidth_hz"] = num_key(&C::radio, &channel::RadioParams::bandwidth_hz, "radio.bandwidth_hz");
        k["radio.bs_height_m"] = num_key(&C::radio, &channel::RadioParams::bs_height_m, "radio.bs_height_m");
        k["radio.ue_height_m"] = num_key(&C::radio, &channel::RadioParams::ue_height_m, "radio.ue_height_m");

        k["protocol.strategy"] = {[](C& c, const std::string& v) {
                                      c.protocol.strategy = protocol::strategy_from_string(v);
                                  },
                                  [](const C& c) { return protocol::to_string(c.protocol.strategy); }};
        k["protocol.interval"] = {[](C& c, const std::string& v) {
                                      c.protocol.interval = static_cast<int>(to_int("protocol.interval", v));
                                  },
                                  [](const C& c) { return std::to_string(c.protocol.interval); }};
        k["protocol.sigma"] = num_key(&C::protocol, &protocol::SessionConfig::sigma, "protocol.sigma");
        k["protocol.theta_full_db"] =
            num_key(&C::protocol, &protocol::SessionConfig::theta_full_db, "protocol.theta_full_db");
        k["protocol.theta_part_db"] =
            num_key(&C::protocol, &protocol::SessionConfig::theta_part_db, "protocol.theta_part_db");
        k["protocol.count_feedback_in_ledger"] = {
            [](C& c, const std::string& v) {
                c.protocol.count_feedback_in_ledger = to_bool("protocol.count_feedback_in_ledger", v);
            },
            [](const C& c) { return std::string(c.protocol.count_feedback_in_ledger ? "true" : "false"); }};
        k["protocol.feedback_delay"] = {
            [](C& c, const std::string& v) { c.protocol.feedback_delay = to_bool("protocol.feedback_delay", v); },
            [](const C& c) { return std::string(c.protocol.feedback_delay ? "true" : "false"); }};

        k["predictor.pos_noise_std_m"] = num_key(
            &C::profile, &predictor::DegradationProfile::pos_noise_std_m_per_slot, "predictor.pos_noise_std_m");
        k["predictor.velocity_bias"] =
            num_key(&C::profile, &predictor::DegradationProfile::velocity_bias_frac, "predictor.velocity_bias");
        k["predictor.heading_noise_rad"] = num_key(
            &C::profile, &predictor::DegradationProfile::heading_noise_rad_per_slot, "predictor.heading_noise_rad");
        k["predictor.yaw_window"] = {[](C& c, const std::string& v) {
                                         const auto [a, b] = to_range("predictor.yaw_window", v);
                                         c.profile.yaw_window_start = static_cast<int>(a);
                                         c.profile.yaw_window_end = static_cast<int>(b);
                                     },
                                     [](const C& c) {
                                         return std::to_string(c.profile.yaw_window_start) + "-" +
                                                std::to_string(c.profile.yaw_window_end);
                                     }};

        k["planner.lambda_full"] =
            num_key(&C::planner, &scheduler::PlannerParams::lambda_full, "planner.lambda_full");
        k["planner.lambda_part"] =
            num_key(&C::planner, &scheduler::PlannerParams::lambda_part, "planner.lambda_part");
        k["planner.infeasible_penalty"] =
            num_key(&C::planner, &scheduler::PlannerParams::infeasible_penalty, "planner.infeasible_penalty");
        k["planner.reference_seeds"] = {[](C& c, const std::string& v) {
                                            c.reference_seeds =
                                                static_cast<int>(to_int("planner.reference_seeds", v));
                                        },
                                        [](const C& c) { return std::to_string(c.reference_seeds); }};

        k["link.subcarriers"] = {[](C& c, const std::string& v) {
                                     c.link.num_subcarriers = static_cast<int>(to_int("link.subcarriers", v));
                                 },
                                 [](const C& c) { return std::to_string(c.link.num_subcarriers); }};
        k["link.pilot_every"] = {[](C& c, const std::string& v) {
                                     c.link.pilot_every = static_cast<int>(to_int("link.pilot_every", v));
                                 },
                                 [](const C& c) { return std::to_string(c.link.pilot_every); }};
        k["link.fading"] = {[](C& c, const std::string& v) {
                                if (v == "flat") c.link.fading = phy::Fading::UnitFlat;
                                else if (v == "rayleigh_block") c.link.fading = phy::Fading::RayleighBlock;
                                else throw ConfigError("link.fading: expected flat or rayleigh_block");
                            },
                            [](const C& c) {
                                return std::string(c.link.fading == phy::Fading::UnitFlat ? "flat" : "rayleigh_block");
                            }};
        k["link.estimation"] = {[](C& c, const std::string& v) {
                                    if (v == "perfect") c.link.estimation = phy::Estimation::Perfect;
                                    else if (v == "ls") c.link.estimation = phy::Estimation::LeastSquares;
                                    else throw ConfigError("link.estimation: expected perfect or ls");
                                },
                                [](const C& c) {
                                    return std::string(c.link.estimation == phy::Estimation::Perfect ? "perfect" : "ls");
                                }};

        k["run.seeds"] = {[](C& c, const std::string& v) { c.seeds = parse_seeds(v); },
                          [](const C& c) { return format_seeds(c.seeds); }};
        k["output.dir"] = {[](C& c, const std::string& v) { c.output_dir = v; },
                           [](const C& c) { return c.output_dir; }};
        return k;
    }();
    return keys;
}

} // namespace

void ExperimentConfig::validate() const {
    if (num_slots < 1 || num_slots > 1000) throw ConfigError("session.num_slots must be in [1, 1000]");
    radio.validate();
    protocol.validate();
    profile.validate();
    planner.validate();
    link.validate();
    if (planner.theta_full_db != protocol.theta_full_db || planner.theta_part_db != protocol.theta_part_db) {
        throw ConfigError("planner thresholds must match the protocol thresholds");
    }
    if (base_stations.empty()) throw ConfigError("channel.bs needs at least one base station");
    if (reference_seeds < 1) throw ConfigError("planner.reference_seeds must be at least 1");
    if (seeds.empty()) throw ConfigError("run.seeds must list at least one seed");
    for (const auto* list : {&blockages, &blockages_forecast}) {
        for (const auto& b : *list) {
            if (b.start_slot < 0 || b.end_slot < b.start_slot || b.extra_loss_db < 0.0) {
                throw ConfigError("blockage ranges need 0 <= start <= end and a non-negative loss");
            }
        }
    }
    if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
    trajectory().validate();
}

channel::Trajectory ExperimentConfig::trajectory() const {
    channel::Trajectory t;
    t.start = route_start;
    t.end = route_end;
    t.num_slots = num_slots;
    t.slot_seconds = world::kSlotSeconds;
    t.speed_mps = world::kCameraSpeed;
    return t;
}

ExperimentConfig parse(const std::string& text) {
    std::map<std::string, std::string> values;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!table().contains(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!values.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }

    ExperimentConfig cfg;
    // The scenario picks the predictor defaults that later keys may override.
    if (auto it = values.find("scenario"); it != values.end()) {
        table().at("scenario").set(cfg, it->second);
        cfg.profile = predictor::DegradationProfile::defaults(cfg.scenario);
    }
    for (const auto& [key, value] : values) {
        if (key == "scenario") continue;
        table().at(key).set(cfg, value);
    }
    cfg.profile.scenario = cfg.scenario;
    cfg.planner.theta_full_db = cfg.protocol.theta_full_db;
    cfg.planner.theta_part_db = cfg.protocol.theta_part_db;
    cfg.validate();
    return cfg;
}

ExperimentConfig load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string serialize(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [key, k] : table()) out += key + " = " + k.get(cfg) + "\n";
    return out;
}

std::vector<std::string> known_keys() {
    std::vector<std::string> out;
    for (const auto& [key, k] : table()) out.push_back(key);
    return out;
}

std::string format_seeds(const std::vector<std::uint64_t>& seeds) {
    std::string out;
    std::size_t i = 0;
    while (i < seeds.size()) {
        std::size_t j = i;
        while (j + 1 < seeds.size() && seeds[j + 1] == seeds[j] + 1) ++j;
        if (!out.empty()) out += ',';
        out += std::to_string(seeds[i]);
        if (j > i) out += "-" + std::to_string(seeds[j]);
        i = j + 1;
    }
    return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> out;
    for (const auto& item : split(text, ',')) {
        const auto [a, b] = to_range("run.seeds", item);
        if (a < 0 || b < a || b - a > 1000000) throw ConfigError("run.seeds: bad range '" + item + "'");
        for (long long s = a; s <= b; ++s) out.push_back(static_cast<std::uint64_t>(s));
    }
    if (out.empty()) throw ConfigError("run.seeds: empty seed list");
    return out;
}

} // namespace semtx::config
