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

#include "semtx/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "semtx/errors.hpp"
#include "semtx/rng.hpp"

namespace semtx::world {

namespace {

double haze(double depth_m) {
    return std::log(std::clamp(depth_m, kMinDepth, kMaxDepth)) / std::log(kMaxDepth);
}

// Draws k * step + base for k uniform in [0, count).
double grid_draw(Rng& rng, double base, double step, int count) {
    std::uniform_int_distribution<int> d(0, count - 1);
    return base + step * d(rng);
}

SceneObject vehicle(int id, Vec2 c, Vec2 v) {
    return {id, ObjectClass::Vehicle, c, 2.0, 1.5, v};
}

void add_buildings(std::vector<SceneObject>& out, Rng& rng, int count, double along_base,
                   double across_center, bool along_x) {
    for (int i = 0; i < count; ++i) {
        const double side = (i % 2 == 0) ? 1.0 : -1.0;
        const double across = across_center + side * grid_draw(rng, 11.0, 0.5, 7);
        const double along = grid_draw(rng, along_base, 0.5, 240);
        const double w = grid_draw(rng, 8.0, 0.25, 33);
        const double h = grid_draw(rng, 8.0, 0.25, 49);
        const Vec2 c = along_x ? Vec2{along, across} : Vec2{across, along};
        out.push_back({static_cast<int>(out.size()), ObjectClass::Building, c, w, h, {}});
    }
}

} // namespace

std::string to_string(Scenario s) {
    switch (s) {
    case Scenario::Basic: return "basic";
    case Scenario::Busy: return "busy";
    case Scenario::Crossroad: return "crossroad";
    }
    return "basic";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "basic") return Scenario::Basic;
    if (s == "busy") return Scenario::Busy;
    if (s == "crossroad") return Scenario::Crossroad;
    throw ConfigError("unknown scenario '" + s + "'");
}

void SceneState::validate() const {
    if (objects.size() > static_cast<std::size_t>(kMaxObjects)) {
        throw InputError("scene holds more than 16 objects");
    }
    std::set<int> ids;
    for (const auto& o : objects) {
        if (!(o.width_m > 0.0) || !(o.height_m > 0.0)) {
            throw InputError("scene object sizes must be positive");
        }
        if (!ids.insert(o.id).second) {
            throw InputError("scene object ids must be unique");
        }
    }
}

const SceneObject* SceneState::find(int id) const {
    for (const auto& o : objects) {
        if (o.id == id) return &o;
    }
    return nullptr;
}

CameraPoint to_camera(const Camera& cam, const Vec2& p) {
    const double dx = p.x - cam.x_m;
    const double dy = p.y - cam.y_m;
    const double c = std::cos(cam.heading_rad);
    const double s = std::sin(cam.heading_rad);
    return {dx * c + dy * s, dx * s - dy * c};
}

Vec2 from_camera(const Camera& cam, const CameraPoint& cp) {
    const double c = std::cos(cam.heading_rad);
    const double s = std::sin(cam.heading_rad);
    return {cam.x_m + cp.forward_m * c + cp.lateral_m * s,
            cam.y_m + cp.forward_m * s - cp.lateral_m * c};
}

double scripted_yaw(Scenario s, int slot) {
    if (s != Scenario::Crossroad) return 0.0;
    const double frac = std::clamp(static_cast<double>(slot - kYawStartSlot) /
                                       (kYawEndSlot - kYawStartSlot),
                                   0.0, 1.0);
    return 0.5 * std::numbers::pi * frac;
}

SceneState scene_init(Scenario scenario, std::uint64_t seed) {
    Rng rng = make_rng(seed, Stream::World);
    SceneState st;
    st.scenario = scenario;
    st.camera = {0.0, 0.0, scripted_yaw(scenario, 0)};

    auto main_vehicle = [&](bool oncoming) {
        const double x = grid_draw(rng, 12.0, 4.0, 16);
        const double lane = oncoming ? 3.5 : grid_draw(rng, -3.5, 3.5, 2);
        const double speed = grid_draw(rng, 6.0, 0.5, 17);
        const int id = static_cast<int>(st.objects.size());
        st.objects.push_back(vehicle(id, {x, lane}, {oncoming ? -speed : speed, 0.0}));
    };

    switch (scenario) {
    case Scenario::Basic:
        for (int i = 0; i < 3; ++i) main_vehicle(false);
        add_buildings(st.objects, rng, 4, 20.0, 0.0, true);
        break;
    case Scenario::Busy:
        for (int i = 0; i < 8; ++i) main_vehicle(i % 3 == 2);
        add_buildings(st.objects, rng, 4, 20.0, 0.0, true);
        break;
    case Scenario::Crossroad: {
        for (int i = 0; i < 2; ++i) main_vehicle(false);
        add_buildings(st.objects, rng, 2, 14.0, 0.0, true);
        // Cross street along +y at x = 60 m.
        for (int i = 0; i < 2; ++i) {
            const double lane = 60.0 + grid_draw(rng, -2.0, 4.0, 2);
            const double y = grid_draw(rng, 20.0, 4.0, 11);
            const double speed = grid_draw(rng, 6.0, 0.5, 13);
            const int id = static_cast<int>(st.objects.size());
            st.objects.push_back(vehicle(id, {lane, y}, {0.0, speed}));
        }
        add_buildings(st.objects, rng, 2, 40.0, 60.0, false);
        break;
    }
    }
    return st;
}

SceneState scene_step(const SceneState& state) {
    SceneState next = state;
    const double step = kCameraSpeed * kSlotSeconds;
    next.camera.x_m += step * std::cos(state.camera.heading_rad);
    next.camera.y_m += step * std::sin(state.camera.heading_rad);
    next.slot = state.slot + 1;
    next.camera.heading_rad += scripted_yaw(state.scenario, next.slot) -
                               scripted_yaw(state.scenario, state.slot);
    for (auto& o : next.objects) {
        o.center.x += o.velocity_mps.x * kSlotSeconds;
        o.center.y += o.velocity_mps.y * kSlotSeconds;
    }
    return next;
}

double background_luma(int row) {
    const double y = row + 0.5;
    if (y < kHorizonRow) {
        return 0.77 + 0.21 * (y / kHorizonRow);
    }
    const double ground_depth = kFocalPx * kCameraHeight / (y - kHorizonRow);
    return 0.27 + 0.21 * haze(ground_depth);
}

double object_luma(ObjectClass cls, double depth_m) {
    double base = 0.02;
    switch (cls) {
    case ObjectClass::Vehicle: base = 0.02; break;
    case ObjectClass::Building: base = 0.52; break;
    case ObjectClass::RoadMarking: base = 0.77; break;
    }
    return base + 0.21 * haze(depth_m);
}

ScreenBox project_box(const CameraPoint& cp, double width_m, double height_m) {
    const double z = cp.forward_m;
    return {kCenterCol + kFocalPx * (cp.lateral_m - 0.5 * width_m) / z,
            kCenterCol + kFocalPx * (cp.lateral_m + 0.5 * width_m) / z,
            kHorizonRow + kFocalPx * (kCameraHeight - height_m) / z,
            kHorizonRow + kFocalPx * kCameraHeight / z};
}

bool in_depth_range(double forward_m) { return forward_m >= kMinDepth && forward_m < kMaxDepth; }

RenderSet render(const SceneState& state) {
    RenderSet out{Frame(kFrameWidth, kFrameHeight), DepthMap(kFrameWidth, kFrameHeight, kMaxDepth),
                  Mask(kFrameWidth, kFrameHeight, 0)};
    for (int r = 0; r < kFrameHeight; ++r) {
        const double bg = background_luma(r);
        for (int c = 0; c < kFrameWidth; ++c) out.frame(c, r) = bg;
    }

    // Pixel (c, r) is covered when its center (c + 0.5, r + 0.5) lies in the box.
    auto first_px = [](double edge) { return static_cast<int>(std::ceil(edge - 0.5)); };

    for (const auto& o : state.objects) {
        const CameraPoint cp = to_camera(state.camera, o.center);
        if (!in_depth_range(cp.forward_m)) continue;
        const ScreenBox box = project_box(cp, o.width_m, o.height_m);
        const int c0 = std::max(0, first_px(box.left));
        const int c1 = std::min(kFrameWidth, first_px(box.right));
        const int r0 = std::max(0, first_px(box.top));
        const int r1 = std::min(kFrameHeight, first_px(box.bottom));
        if (c0 >= c1 || r0 >= r1) continue;
        const double luma = object_luma(o.cls, cp.forward_m);
        const auto label = static_cast<std::uint8_t>(o.cls);
        for (int r = r0; r < r1; ++r) {
            for (int c = c0; c < c1; ++c) {
                if (cp.forward_m < out.depth(c, r)) {
                    out.depth(c, r) = cp.forward_m;
                    out.mask(c, r) = label;
                    out.frame(c, r) = luma;
                }
            }
        }
    }
    return out;
}

Frame render_frame(const SceneState& state) { return render(state).frame; }
DepthMap render_depth(const SceneState& state) { return render(state).depth; }
Mask render_mask(const SceneState& state) { return render(state).mask; }

} // namespace semtx::world
