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

#include <cstddef>
#include <vector>

namespace semtx::channel {

/// Link-budget parameters of the two-base-station uplink.
struct RadioParams {
    double carrier_mhz = 2000.0;
    double tx_power_dbm = 10.0;
    double antenna_gain_dbi = 15.0;
    double bandwidth_hz = 2.0e7;
    double bs_height_m = 10.0;
    double ue_height_m = 1.5;

    /// Throws ConfigError when a field is outside its valid range.
    void validate() const;
};

struct Position {
    double x_m = 0.0;
    double y_m = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

double distance_m(const Position& a, const Position& b);

/// Straight-line route sampled at num_slots + 1 equally spaced points.
///
/// Positions depend only on the slot count. speed_mps is guidance for the
/// predictor and does not move the radio position.
struct Trajectory {
    Position start;
    Position end;
    int num_slots = 20;
    double slot_seconds = 0.5;
    double speed_mps = 12.0;

    void validate() const;
    Position at(int slot) const;
};

/// Extra attenuation on an inclusive range of slots.
struct BlockageEvent {
    int start_slot = 0;
    int end_slot = 0;
    double extra_loss_db = 20.0;

    bool covers(int slot) const noexcept { return slot >= start_slot && slot <= end_slot; }
};

struct SnrForecast {
    std::vector<double> snr_db;
    std::vector<int> serving_bs;

    std::size_t size() const noexcept { return snr_db.size(); }
};

/// Mobile antenna height correction a(h_r) of the urban Hata model, in dB.
double mobile_correction(double ue_height_m);

/// Urban COST 231 Hata loss (without the metropolitan offset), distance in meters.
double path_loss_db(double distance_m, const RadioParams& radio);

/// Thermal noise floor -174 dBm/Hz integrated over the bandwidth.
double noise_floor_dbm(double bandwidth_hz);

/// SNR in dB: received power minus noise floor, both in dBm.
double snr_db_at(const Position& pos, const Position& bs, const RadioParams& radio,
                 double blockage_loss_db = 0.0);

/// Per-slot SNR along a trajectory with max-SNR serving-cell selection.
/// Ties go to the lower BS index.
SnrForecast snr_trace(const Trajectory& traj, const std::vector<Position>& base_stations,
                      const RadioParams& radio, const std::vector<BlockageEvent>& blockages = {});

/// Constant-SNR forecast of num_slots + 1 entries, serving BS 0.
SnrForecast fixed_snr(double snr_db, int num_slots);

} // namespace semtx::channel
