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
#include <vector>

#include "semtx/codec.hpp"
#include "semtx/rng.hpp"
#include "semtx/world.hpp"

namespace semtx::predictor {

/// Noise model of the frame predictor for one scenario.
struct DegradationProfile {
    world::Scenario scenario = world::Scenario::Basic;
    double pos_noise_std_m_per_slot = 0.15;
    double velocity_bias_frac = 0.05;
    double heading_noise_rad_per_slot = 0.0;
    int yaw_window_start = world::kYawStartSlot;
    int yaw_window_end = world::kYawEndSlot;

    /// Calibrated defaults: basic 0.15 m, busy 0.40 m, crossroad 0.40 m plus
    /// 0.05 rad of heading noise inside the yaw window; 5 % speed bias.
    static DegradationProfile defaults(world::Scenario s);
    /// No noise and no bias: the predictor mirrors the world exactly.
    static DegradationProfile exact(world::Scenario s);

    void validate() const;
};

/// Structured motion guidance the receiver gets instead of a text prompt.
struct Guidance {
    double speed_mps = world::kCameraSpeed;
    world::Scenario heading_script = world::Scenario::Basic;
};

struct PredictorState {
    world::SceneState believed;
    int slots_since_seed = 0;
    double seed_quality = 1.0;
    /// Set when the last seeding attempt carried no usable record.
    bool seed_failed = false;
};

/// Receiver belief before anything is decoded: camera at the route start, no objects.
PredictorState initial_state(world::Scenario scenario);

/// Perfect seed straight from the ground-truth scene.
PredictorState seed_exact(const world::SceneState& truth);

/// Belief from decoded descriptor hints. Objects whose record failed keep their
/// prior values; a fully failed descriptor leaves the prior in place with quality 0.
PredictorState seed_from_decoded(const codec::SceneHints& hints, double decode_corruption,
                                 const PredictorState& prior);

struct Prediction {
    world::RenderSet render;
    PredictorState state;
};

/// Advances the belief by one slot and renders it.
Prediction predict_step(const PredictorState& ps, const Guidance& guidance,
                        const DegradationProfile& profile, Rng& rng);

/// Advances the belief by one slot without rendering.
PredictorState advance(const PredictorState& ps, const Guidance& guidance,
                       const DegradationProfile& profile, Rng& rng);

inline constexpr double kRepairGatePx = 30.0;
inline constexpr double kRepairCutoff = 0.5;

struct RepairResult {
    world::Frame frame;
    PredictorState state;
    int realigned = 0;
};

/// Mask-conditioned repair. Each believed object is re-projected onto the
/// best-matching same-class region within the 30 px gate; the move is scaled
/// by (1 - mask_corruption). Corruption >= 0.5 leaves the state untouched.
/// When only_ids is non-empty, objects with other ids are left alone.
RepairResult repair(const PredictorState& ps, const world::Mask& decoded_mask, double mask_corruption,
                    const std::vector<int>& only_ids = {});

/// Receiver handling of a decoded full payload: descriptor seeding, then
/// image-assisted realignment of objects whose records failed and discovery
/// of objects that have no prior.
PredictorState receive_full(const codec::FullDecoded& decoded, const PredictorState& prior,
                            const Guidance& guidance);

/// Mean frame MSE at prediction horizons 0..horizon from a perfect seed taken
/// at start_slot, averaged over seeds 0..n_seeds-1 and made non-decreasing.
std::vector<double> degradation_reference(const DegradationProfile& profile, int horizon, int n_seeds,
                                          int start_slot = 0);

/// Same as above over an explicit seed list.
std::vector<double> degradation_reference(const DegradationProfile& profile, int horizon,
                                          const std::vector<std::uint64_t>& seeds, int start_slot = 0);

/// Pool-adjacent-violators fit: closest non-decreasing sequence in least squares.
std::vector<double> isotonic_non_decreasing(const std::vector<double>& values);

} // namespace semtx::predictor
