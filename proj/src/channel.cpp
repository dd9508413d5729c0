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

#include "semtx/channel.hpp"

#include <cmath>
#include <string>

#include "semtx/errors.hpp"

namespace semtx::channel {

void RadioParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string("radio.") + name + " must be finite and positive");
        }
    };
    positive(carrier_mhz, "carrier_mhz");
    positive(antenna_gain_dbi, "antenna_gain_dbi");
    positive(bandwidth_hz, "bandwidth_hz");
    positive(bs_height_m, "bs_height_m");
    positive(ue_height_m, "ue_height_m");
    if (!std::isfinite(tx_power_dbm)) {
        throw ConfigError("radio.tx_power_dbm must be finite");
    }
    if (carrier_mhz < 150.0 || carrier_mhz > 2000.0) {
        throw ConfigError("radio.carrier_mhz outside the Hata validity range [150, 2000]");
    }
}

double distance_m(const Position& a, const Position& b) {
    return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

void Trajectory::validate() const {
    if (num_slots < 1) {
        throw ConfigError("trajectory needs at least one slot");
    }
    if (!(slot_seconds > 0.0)) {
        throw ConfigError("trajectory.slot_seconds must be positive");
    }
    if (!std::isfinite(start.x_m) || !std::isfinite(start.y_m) || !std::isfinite(end.x_m) ||
        !std::isfinite(end.y_m)) {
        throw ConfigError("trajectory endpoints must be finite");
    }
}

Position Trajectory::at(int slot) const {
    const double frac = static_cast<double>(slot) / num_slots;
    return {start.x_m + (end.x_m - start.x_m) * frac, start.y_m + (end.y_m - start.y_m) * frac};
}

double mobile_correction(double ue_height_m) {
    if (!(ue_height_m > 0.0)) {
        throw DomainError("mobile_correction: UE height must be positive");
    }
    const double lg = std::log10(11.75 * ue_height_m);
    return 3.2 * lg * lg - 4.97;
}

double path_loss_db(double distance_m, const RadioParams& radio) {
    if (!(distance_m > 0.0)) {
        throw DomainError("path_loss_db: distance must be positive");
    }
    const double log_ht = std::log10(radio.bs_height_m);
    return 46.3 + 33.9 * std::log10(radio.carrier_mhz) - 13.82 * log_ht -
           mobile_correction(radio.ue_height_m) +
           (44.9 - 6.55 * log_ht) * std::log10(distance_m / 1000.0);
}

double noise_floor_dbm(double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) {
        throw DomainError("noise_floor_dbm: bandwidth must be positive");
    }
    return -174.0 + 10.0 * std::log10(bandwidth_hz);
}

double snr_db_at(const Position& pos, const Position& bs, const RadioParams& radio,
                 double blockage_loss_db) {
    const double d = distance_m(pos, bs);
    if (d == 0.0) {
        throw DomainError("snr_db_at: UE and BS positions coincide");
    }
    const double rx_dbm = radio.tx_power_dbm + radio.antenna_gain_dbi - path_loss_db(d, radio) -
                          blockage_loss_db;
    return rx_dbm - noise_floor_dbm(radio.bandwidth_hz);
}

SnrForecast snr_trace(const Trajectory& traj, const std::vector<Position>& base_stations,
                      const RadioParams& radio, const std::vector<BlockageEvent>& blockages) {
    if (base_stations.empty()) {
        throw ConfigError("snr_trace: at least one base station is required");
    }
    traj.validate();

    SnrForecast out;
    out.snr_db.reserve(traj.num_slots + 1);
    out.serving_bs.reserve(traj.num_slots + 1);
    for (int slot = 0; slot <= traj.num_slots; ++slot) {
        double loss = 0.0;
        for (const auto& b : blockages) {
            if (b.covers(slot)) loss += b.extra_loss_db;
        }
        const Position pos = traj.at(slot);
        int best = 0;
        double best_snr = snr_db_at(pos, base_stations[0], radio, loss);
        for (std::size_t i = 1; i < base_stations.size(); ++i) {
            const double s = snr_db_at(pos, base_stations[i], radio, loss);
            if (s > best_snr) {
                best_snr = s;
                best = static_cast<int>(i);
            }
        }
        out.snr_db.push_back(best_snr);
        out.serving_bs.push_back(best);
    }
    return out;
}

SnrForecast fixed_snr(double snr_db, int num_slots) {
    SnrForecast out;
    out.snr_db.assign(num_slots + 1, snr_db);
    out.serving_bs.assign(num_slots + 1, 0);
    return out;
}

} // namespace semtx::channel
