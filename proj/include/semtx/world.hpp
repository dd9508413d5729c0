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
#include <string>
#include <vector>

#include "semtx/grid.hpp"

namespace semtx::world {

inline constexpr int kFrameWidth = 256;
inline constexpr int kFrameHeight = 128;
inline constexpr double kMinDepth = 1.0;
inline constexpr double kMaxDepth = 100.0;
inline constexpr double kSlotSeconds = 0.5;
inline constexpr double kCameraSpeed = 12.0;
inline constexpr int kMaxObjects = 16;

// Pinhole camera: 90 degree horizontal field of view, horizon at mid-height.
inline constexpr double kFocalPx = 128.0;
inline constexpr double kCenterCol = 128.0;
inline constexpr double kHorizonRow = 64.0;
inline constexpr double kCameraHeight = 1.5;

// Crossroad camera turns by +90 degrees, linearly over these slots.
inline constexpr int kYawStartSlot = 6;
inline constexpr int kYawEndSlot = 12;

enum class Scenario { Basic, Busy, Crossroad };

enum class ObjectClass : std::uint8_t { Vehicle = 1, Building = 2, RoadMarking = 3 };

inline constexpr int kNumLabels = 4; // background + three classes

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Camera {
    double x_m = 0.0;
    double y_m = 0.0;
    double heading_rad = 0.0;

    friend bool operator==(const Camera&, const Camera&) = default;
};

struct SceneObject {
    int id = 0;
    ObjectClass cls = ObjectClass::Vehicle;
    Vec2 center;        // ground-plane position, world frame
    double width_m = 1.0;
    double height_m = 1.0;
    Vec2 velocity_mps;

    friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct SceneState {
    Camera camera;
    std::vector<SceneObject> objects;
    Scenario scenario = Scenario::Basic;
    int slot = 0;

    void validate() const;
    const SceneObject* find(int id) const;

    friend bool operator==(const SceneState&, const SceneState&) = default;
};

using Frame = Grid<double>;
using DepthMap = Grid<double>;
using Mask = Grid<std::uint8_t>;

struct RenderSet {
    Frame frame;
    DepthMap depth;
    Mask mask;
};

/// Object in camera coordinates: forward distance and lateral offset (right positive).
struct CameraPoint {
    double forward_m = 0.0;
    double lateral_m = 0.0;
};

CameraPoint to_camera(const Camera& cam, const Vec2& p);
Vec2 from_camera(const Camera& cam, const CameraPoint& cp);

/// Heading offset of the scripted crossroad turn at a slot (0 for other scenarios).
double scripted_yaw(Scenario s, int slot);

SceneState scene_init(Scenario scenario, std::uint64_t seed);
SceneState scene_step(const SceneState& state);

/// Renders frame, depth and mask in one pass; all three agree per pixel.
RenderSet render(const SceneState& state);
Frame render_frame(const SceneState& state);
DepthMap render_depth(const SceneState& state);
Mask render_mask(const SceneState& state);

/// Luma of an empty pixel row and of an object surface at a given depth.
double background_luma(int row);
double object_luma(ObjectClass cls, double depth_m);

/// Screen-space box of an object, in pixels (half-open, unclipped).
struct ScreenBox {
    double left = 0.0;
    double right = 0.0;
    double top = 0.0;
    double bottom = 0.0;
};

ScreenBox project_box(const CameraPoint& cp, double width_m, double height_m);
bool in_depth_range(double forward_m);

} // namespace semtx::world
