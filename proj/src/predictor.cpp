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

#include "semtx/predictor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "semtx/errors.hpp"
#include "semtx/metrics.hpp"

namespace semtx::predictor {

namespace {

using world::kFrameHeight;
using world::kFrameWidth;

constexpr int kSpawnedIdBase = 128;
// Realignment must beat the current pose by this many score units per pixel of
// box perimeter; cell-quantized masks cannot produce such gains for a box
// that already fits.
constexpr double kAlignMargin = 0.75;

void sort_by_id(world::SceneState& s) {
    std::sort(s.objects.begin(), s.objects.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
}

struct PixelBox {
    int c0 = 0, c1 = 0, r0 = 0, r1 = 0; // clipped, half-open

    bool empty() const { return c0 >= c1 || r0 >= r1; }
    int perimeter() const { return empty() ? 0 : 2 * ((c1 - c0) + (r1 - r0)); }
};

PixelBox to_pixels(const world::ScreenBox& b) {
    auto first_px = [](double edge) { return static_cast<int>(std::ceil(edge - 0.5)); };
    return {std::max(0, first_px(b.left)), std::min(kFrameWidth, first_px(b.right)),
            std::max(0, first_px(b.top)), std::min(kFrameHeight, first_px(b.bottom))};
}

// Summed-area table of per-pixel +1 / -1 / 0 evidence.
class Evidence {
public:
    Evidence(const world::Mask& mask, const std::vector<std::uint8_t>& claimed, std::uint8_t label)
        : sums_((kFrameWidth + 1) * (kFrameHeight + 1), 0) {
        for (int r = 0; r < kFrameHeight; ++r) {
            int row = 0;
            for (int c = 0; c < kFrameWidth; ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * kFrameWidth + c;
                if (!claimed[i]) row += mask.data()[i] == label ? 1 : -1;
                at(c + 1, r + 1) = at(c + 1, r) + row;
            }
        }
    }

    // Half of (hits - misses) over the box.
    double score(const PixelBox& b) const {
        if (b.empty()) return 0.0;
        return 0.5 * (at(b.c1, b.r1) - at(b.c0, b.r1) - at(b.c1, b.r0) + at(b.c0, b.r0));
    }

private:
    int& at(int c, int r) { return sums_[static_cast<std::size_t>(r) * (kFrameWidth + 1) + c]; }
    int at(int c, int r) const { return sums_[static_cast<std::size_t>(r) * (kFrameWidth + 1) + c]; }

    std::vector<int> sums_;
};

world::Mask upsample_labels(const Grid<std::uint8_t>& cells) {
    world::Mask m(kFrameWidth, kFrameHeight);
    for (int y = 0; y < kFrameHeight; ++y) {
        for (int x = 0; x < kFrameWidth; ++x) m(x, y) = cells(x / codec::kCellPx, y / codec::kCellPx);
    }
    return m;
}

Grid<std::uint8_t> smooth_labels(const Grid<std::uint8_t>& in) {
    Grid<std::uint8_t> out = in;
    for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < in.width(); ++x) {
            std::array<int, world::kNumLabels> counts{};
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= in.width() || ny >= in.height()) continue;
                    ++counts[in(nx, ny) % world::kNumLabels];
                }
            }
            int best = in(x, y) % world::kNumLabels;
            for (int l = 0; l < world::kNumLabels; ++l) {
                if (counts[l] > counts[best]) best = l;
            }
            out(x, y) = static_cast<std::uint8_t>(best);
        }
    }
    return out;
}

// Objects for label components of a coarse class map, placed by inverse projection.
void spawn_from_labels(world::SceneState& belief, const Grid<std::uint8_t>& raw_cells,
                       const Guidance& guidance) {
    const Grid<std::uint8_t> cells = smooth_labels(raw_cells);
    const int w = cells.width();
    const int h = cells.height();
    std::vector<int> comp(cells.size(), -1);
    int next_id = kSpawnedIdBase;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            const std::uint8_t label = cells(x0, y0);
            const std::size_t i0 = static_cast<std::size_t>(y0) * w + x0;
            if (comp[i0] >= 0 || (label != 1 && label != 2)) continue;
            // Flood fill.
            int cmin = x0, cmax = x0, rmin = y0, rmax = y0, count = 0;
            std::vector<std::pair<int, int>> stack{{x0, y0}};
            comp[i0] = 1;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                ++count;
                cmin = std::min(cmin, x); cmax = std::max(cmax, x);
                rmin = std::min(rmin, y); rmax = std::max(rmax, y);
                const int dx[] = {1, -1, 0, 0};
                const int dy[] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = x + dx[k], ny = y + dy[k];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                    if (comp[ni] >= 0 || cells(nx, ny) != label) continue;
                    comp[ni] = 1;
                    stack.emplace_back(nx, ny);
                }
            }
            if (count < 2 || belief.objects.size() >= static_cast<std::size_t>(world::kMaxObjects)) continue;
            const double left = cmin * codec::kCellPx;
            const double right = (cmax + 1) * codec::kCellPx;
            const double top = rmin * codec::kCellPx;
            const double bottom = (rmax + 1) * codec::kCellPx;
            if (bottom <= world::kHorizonRow + 1.0) continue;
            const double z = std::max(world::kMinDepth,
                                      world::kFocalPx * world::kCameraHeight / (bottom - world::kHorizonRow));
            if (!world::in_depth_range(z)) continue;
            world::SceneObject o;
            o.id = next_id++;
            o.cls = static_cast<world::ObjectClass>(label);
            o.width_m = (right - left) * z / world::kFocalPx;
            o.height_m = (bottom - top) * z / world::kFocalPx;
            const double lateral = (0.5 * (left + right) - world::kCenterCol) * z / world::kFocalPx;
            o.center = world::from_camera(belief.camera, {z, lateral});
            if (o.cls == world::ObjectClass::Vehicle) {
                o.velocity_mps = {guidance.speed_mps * std::cos(belief.camera.heading_rad),
                                  guidance.speed_mps * std::sin(belief.camera.heading_rad)};
            }
            belief.objects.push_back(o);
        }
    }
}

} // namespace

DegradationProfile DegradationProfile::defaults(world::Scenario s) {
    DegradationProfile p;
    p.scenario = s;
    switch (s) {
    case world::Scenario::Basic: p.pos_noise_std_m_per_slot = 0.15; break;
    case world::Scenario::Busy: p.pos_noise_std_m_per_slot = 0.40; break;
    case world::Scenario::Crossroad:
        p.pos_noise_std_m_per_slot = 0.40;
        p.heading_noise_rad_per_slot = 0.05;
        break;
    }
    return p;
}

DegradationProfile DegradationProfile::exact(world::Scenario s) {
    DegradationProfile p;
    p.scenario = s;
    p.pos_noise_std_m_per_slot = 0.0;
    p.velocity_bias_frac = 0.0;
    p.heading_noise_rad_per_slot = 0.0;
    return p;
}

void DegradationProfile::validate() const {
    if (pos_noise_std_m_per_slot < 0.0 || velocity_bias_frac < 0.0 || heading_noise_rad_per_slot < 0.0) {
        throw ConfigError("predictor noise parameters must be non-negative");
    }
    if (yaw_window_start > yaw_window_end) {
        throw ConfigError("predictor.yaw_window start must not exceed its end");
    }
}

PredictorState initial_state(world::Scenario scenario) {
    PredictorState ps;
    ps.believed.scenario = scenario;
    ps.believed.camera = {0.0, 0.0, world::scripted_yaw(scenario, 0)};
    ps.seed_quality = 0.0;
    ps.seed_failed = true;
    return ps;
}

PredictorState seed_exact(const world::SceneState& truth) {
    PredictorState ps;
    ps.believed = truth;
    return ps;
}

PredictorState seed_from_decoded(const codec::SceneHints& hints, double decode_corruption,
                                 const PredictorState& prior) {
    PredictorState out = prior;
    const int failed = hints.failed();
    if (failed == static_cast<int>(codec::kNumRecords) + 1) {
        out.seed_quality = 0.0;
        out.seed_failed = true;
        return out;
    }
    if (hints.camera.valid) out.believed.camera = hints.camera.camera;

    std::vector<world::SceneObject> from_records;
    for (const auto& r : hints.records) {
        if (r.valid && r.present) from_records.push_back(r.object);
    }
    if (failed == 0) {
        out.believed.objects = from_records;
    } else {
        auto& objs = out.believed.objects;
        for (const auto& rec : from_records) {
            // Spawned stand-ins for this object are superseded.
            std::erase_if(objs, [&](const world::SceneObject& o) {
                return o.id >= kSpawnedIdBase && o.cls == rec.cls &&
                       std::hypot(o.center.x - rec.center.x, o.center.y - rec.center.y) < 3.0;
            });
            auto it = std::find_if(objs.begin(), objs.end(), [&](const auto& o) { return o.id == rec.id; });
            if (it != objs.end()) {
                *it = rec;
            } else if (objs.size() < static_cast<std::size_t>(world::kMaxObjects)) {
                objs.push_back(rec);
            }
        }
    }
    sort_by_id(out.believed);
    out.seed_quality = std::clamp(1.0 - decode_corruption, 0.0, 1.0);
    out.slots_since_seed = 0;
    out.seed_failed = false;
    return out;
}

PredictorState advance(const PredictorState& ps, const Guidance& guidance,
                       const DegradationProfile& profile, Rng& rng) {
    PredictorState next = ps;
    world::SceneState& b = next.believed;
    const double dt = world::kSlotSeconds;
    const double drift_scale = 2.0 - std::clamp(ps.seed_quality, 0.0, 1.0);

    const double step = guidance.speed_mps * dt;
    b.camera.x_m += step * std::cos(ps.believed.camera.heading_rad);
    b.camera.y_m += step * std::sin(ps.believed.camera.heading_rad);
    b.slot = ps.believed.slot + 1;
    b.camera.heading_rad += world::scripted_yaw(guidance.heading_script, b.slot) -
                            world::scripted_yaw(guidance.heading_script, ps.believed.slot);
    if (profile.heading_noise_rad_per_slot > 0.0 && b.slot >= profile.yaw_window_start &&
        b.slot <= profile.yaw_window_end) {
        std::normal_distribution<double> yaw(0.0, profile.heading_noise_rad_per_slot * drift_scale);
        b.camera.heading_rad += yaw(rng);
    }

    const double speed_factor = 1.0 + profile.velocity_bias_frac * drift_scale;
    std::normal_distribution<double> jitter(0.0, profile.pos_noise_std_m_per_slot * drift_scale);
    const bool noisy = profile.pos_noise_std_m_per_slot > 0.0;
    for (auto& o : b.objects) {
        o.center.x += o.velocity_mps.x * dt * speed_factor;
        o.center.y += o.velocity_mps.y * dt * speed_factor;
        if (noisy) {
            o.center.x += jitter(rng);
            o.center.y += jitter(rng);
        }
    }
    next.slots_since_seed = ps.slots_since_seed + 1;
    return next;
}

Prediction predict_step(const PredictorState& ps, const Guidance& guidance,
                        const DegradationProfile& profile, Rng& rng) {
    Prediction out;
    out.state = advance(ps, guidance, profile, rng);
    out.render = world::render(out.state.believed);
    return out;
}

RepairResult repair(const PredictorState& ps, const world::Mask& decoded_mask, double mask_corruption,
                    const std::vector<int>& only_ids) {
    if (decoded_mask.width() != kFrameWidth || decoded_mask.height() != kFrameHeight) {
        throw InputError("repair: mask must be 256x128");
    }
    RepairResult out;
    out.state = ps;
    if (mask_corruption >= kRepairCutoff) {
        out.frame = world::render_frame(ps.believed);
        return out;
    }
    const double strength = std::clamp(1.0 - mask_corruption, 0.0, 1.0);
    world::SceneState& b = out.state.believed;

    std::vector<std::size_t> order(b.objects.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> forward(b.objects.size());
    for (std::size_t i = 0; i < b.objects.size(); ++i) {
        forward[i] = world::to_camera(b.camera, b.objects[i].center).forward_m;
    }
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return forward[x] < forward[y]; });

    std::vector<std::uint8_t> claimed(static_cast<std::size_t>(kFrameWidth) * kFrameHeight, 0);
    auto claim = [&](const PixelBox& pb) {
        for (int r = pb.r0; r < pb.r1; ++r) {
            for (int c = pb.c0; c < pb.c1; ++c) claimed[static_cast<std::size_t>(r) * kFrameWidth + c] = 1;
        }
    };

    std::vector<PixelBox> boxes(b.objects.size());
    for (std::size_t i = 0; i < b.objects.size(); ++i) {
        if (!world::in_depth_range(forward[i])) continue;
        const world::CameraPoint cp = world::to_camera(b.camera, b.objects[i].center);
        boxes[i] = to_pixels(world::project_box(cp, b.objects[i].width_m, b.objects[i].height_m));
    }
    std::vector<bool> done(b.objects.size(), false);
    auto visible = [&](const PixelBox& pb) {
        int n = 0;
        for (int r = pb.r0; r < pb.r1; ++r) {
            for (int c = pb.c0; c < pb.c1; ++c) n += !claimed[static_cast<std::size_t>(r) * kFrameWidth + c];
        }
        return n;
    };

    for (std::size_t idx : order) {
        done[idx] = true;
        world::SceneObject& o = b.objects[idx];
        const world::CameraPoint cp = world::to_camera(b.camera, o.center);
        if (!world::in_depth_range(cp.forward_m)) continue;
        const world::ScreenBox box = world::project_box(cp, o.width_m, o.height_m);
        const PixelBox current = to_pixels(box);
        if (current.empty()) continue;
        const bool eligible =
            only_ids.empty() || std::find(only_ids.begin(), only_ids.end(), o.id) != only_ids.end();
        // Mostly hidden behind nearer objects: the mask says little about it.
        const int area = (current.c1 - current.c0) * (current.r1 - current.r0);
        if (!eligible || 2 * visible(current) < area) {
            claim(current);
            continue;
        }

        // Pixels still explained by other believed objects of the class are not evidence.
        std::vector<std::uint8_t> blocked = claimed;
        for (std::size_t j = 0; j < b.objects.size(); ++j) {
            if (done[j] || b.objects[j].cls != o.cls || boxes[j].empty()) continue;
            for (int r = boxes[j].r0; r < boxes[j].r1; ++r) {
                for (int c = boxes[j].c0; c < boxes[j].c1; ++c) {
                    blocked[static_cast<std::size_t>(r) * kFrameWidth + c] = 1;
                }
            }
        }
        const Evidence ev(decoded_mask, blocked, static_cast<std::uint8_t>(o.cls));
        const double current_score = ev.score(current);
        const double center_col = 0.5 * (box.left + box.right);
        const double center_row = 0.5 * (box.top + box.bottom);

        double best_score = current_score;
        double best_cost = 0.0;
        world::CameraPoint best_cp = cp;
        PixelBox best_box = current;
        for (int mi = -6; mi <= 6; ++mi) {
            const double z = cp.forward_m * (1.0 + 0.05 * mi);
            if (!world::in_depth_range(z)) continue;
            for (int shift = -static_cast<int>(kRepairGatePx); shift <= static_cast<int>(kRepairGatePx); ++shift) {
                if (mi == 0 && shift == 0) continue;
                const double col = center_col + shift;
                const world::CameraPoint cand{z, (col - world::kCenterCol) * z / world::kFocalPx};
                const world::ScreenBox cb = world::project_box(cand, o.width_m, o.height_m);
                const double dv = 0.5 * (cb.top + cb.bottom) - center_row;
                if (std::hypot(static_cast<double>(shift), dv) > kRepairGatePx) continue;
                const PixelBox pb = to_pixels(cb);
                const double s = ev.score(pb);
                const double cost = std::abs(shift) + 20.0 * std::abs(mi);
                if (s > best_score || (s == best_score && cost < best_cost && s > current_score)) {
                    best_score = s;
                    best_cost = cost;
                    best_cp = cand;
                    best_box = pb;
                }
            }
        }

        const double gain = best_score - current_score;
        if (best_score > 0.0 && gain > kAlignMargin * current.perimeter()) {
            const world::Vec2 target = world::from_camera(b.camera, best_cp);
            o.center.x += strength * (target.x - o.center.x);
            o.center.y += strength * (target.y - o.center.y);
            ++out.realigned;
            claim(best_box);
        } else {
            claim(current);
        }
    }

    out.state.slots_since_seed = 0;
    out.state.seed_quality = 1.0 - mask_corruption;
    out.state.seed_failed = false;
    out.frame = world::render_frame(b);
    return out;
}

PredictorState receive_full(const codec::FullDecoded& decoded, const PredictorState& prior,
                            const Guidance& guidance) {
    PredictorState ps = seed_from_decoded(decoded.hints, decoded.corruption, prior);
    if (decoded.corruption <= 0.0) return ps;

    const Grid<std::uint8_t> labels = codec::labels_from_luma_cells(decoded.cells);
    const double noise = codec::estimate_label_noise(labels);
    if (noise >= kRepairCutoff) return ps;

    std::vector<int> fallback;
    for (const auto& o : ps.believed.objects) {
        const bool from_record = std::any_of(decoded.hints.records.begin(), decoded.hints.records.end(),
                                             [&](const codec::RecordHint& r) {
                                                 return r.valid && r.present && r.object.id == o.id;
                                             });
        if (!from_record) fallback.push_back(o.id);
    }
    const double record_quality = ps.seed_failed ? 0.0 : ps.seed_quality;
    if (prior.believed.objects.empty() && fallback.empty()) {
        spawn_from_labels(ps.believed, labels, guidance);
    } else if (!fallback.empty()) {
        ps = repair(ps, upsample_labels(labels), noise, fallback).state;
    }
    ps.seed_quality = std::max(record_quality, 1.0 - noise);
    ps.slots_since_seed = 0;
    ps.seed_failed = false;
    return ps;
}

std::vector<double> isotonic_non_decreasing(const std::vector<double>& values) {
    // Blocks of (mean, weight).
    std::vector<std::pair<double, int>> blocks;
    for (double v : values) {
        blocks.emplace_back(v, 1);
        while (blocks.size() > 1 && blocks[blocks.size() - 2].first > blocks.back().first) {
            auto [m2, w2] = blocks.back();
            blocks.pop_back();
            auto& [m1, w1] = blocks.back();
            m1 = (m1 * w1 + m2 * w2) / (w1 + w2);
            w1 += w2;
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (auto [m, w] : blocks) out.insert(out.end(), static_cast<std::size_t>(w), m);
    return out;
}

std::vector<double> degradation_reference(const DegradationProfile& profile, int horizon,
                                          const std::vector<std::uint64_t>& seeds, int start_slot) {
    if (horizon < 1) throw InputError("degradation_reference: horizon must be at least 1");
    if (seeds.empty()) throw InputError("degradation_reference: need at least one seed");
    profile.validate();
    const Guidance guidance{world::kCameraSpeed, profile.scenario};
    std::vector<double> sum(horizon + 1, 0.0);
    for (std::uint64_t seed : seeds) {
        world::SceneState truth = world::scene_init(profile.scenario, seed);
        for (int s = 0; s < start_slot; ++s) truth = world::scene_step(truth);
        PredictorState ps = seed_exact(truth);
        Rng rng = make_rng(seed, Stream::Reference);
        for (int k = 1; k <= horizon; ++k) {
            truth = world::scene_step(truth);
            ps = advance(ps, guidance, profile, rng);
            sum[k] += metrics::mse(world::render_frame(ps.believed), world::render_frame(truth));
        }
    }
    for (double& v : sum) v /= static_cast<double>(seeds.size());
    return isotonic_non_decreasing(sum);
}

std::vector<double> degradation_reference(const DegradationProfile& profile, int horizon, int n_seeds,
                                          int start_slot) {
    if (n_seeds < 1) throw InputError("degradation_reference: need at least one seed");
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_seeds));
    std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
    return degradation_reference(profile, horizon, seeds, start_slot);
}

} // namespace semtx::predictor
