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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "semtx/world.hpp"

namespace semtx::codec {

enum class PayloadKind : std::uint8_t { Full = 1, Mask = 2, Depth = 3 };

inline constexpr std::size_t kFullBytes = 2048;
inline constexpr std::size_t kMaskBytes = 512;
inline constexpr std::size_t kDepthBytes = 102;

std::size_t payload_size(PayloadKind kind);

/// Fixed-length byte block; length always equals payload_size(kind).
struct Payload {
    PayloadKind kind = PayloadKind::Full;
    std::vector<std::uint8_t> bytes;
};

// Full payload layout (offsets in bytes).
inline constexpr std::size_t kHeaderBytes = 16;
inline constexpr std::size_t kRecordBytes = 16;
inline constexpr std::size_t kNumRecords = 16;
inline constexpr std::size_t kDescriptorOffset = kHeaderBytes;
inline constexpr std::size_t kImageOffset = kDescriptorOffset + kRecordBytes * kNumRecords; // 272
inline constexpr std::size_t kImageBytes = 1536;
inline constexpr std::size_t kTailOffset = kImageOffset + kImageBytes;                      // 1808
inline constexpr std::size_t kCameraRecordOffset = kTailOffset;

// Coarse grids.
inline constexpr int kCellPx = 4;
inline constexpr int kCellCols = world::kFrameWidth / kCellPx;  // 64
inline constexpr int kCellRows = world::kFrameHeight / kCellPx; // 32
inline constexpr int kDepthCellPx = 16;
inline constexpr int kDepthCols = world::kFrameWidth / kDepthCellPx;  // 16
inline constexpr int kDepthRows = world::kFrameHeight / kDepthCellPx; // 8
inline constexpr int kDepthLevels = 64;
inline constexpr std::size_t kDepthHeaderBytes = 6;

inline constexpr std::uint8_t kMagic = 0xA5;

// Quantizer steps of the descriptor fields.
inline constexpr double kCenterStep = 0.5;
inline constexpr double kSizeStep = 0.25;
inline constexpr double kVelocityStep = 0.125;

struct PayloadTag {
    std::uint16_t slot = 0;
    std::uint16_t sequence = 0;
};

/// One decoded descriptor record. valid is false when the checksum or a
/// range check failed; present marks a record that carries an object.
struct RecordHint {
    bool valid = false;
    bool present = false;
    world::SceneObject object;
};

struct CameraHint {
    bool valid = false;
    world::Camera camera;
};

struct SceneHints {
    std::array<RecordHint, kNumRecords> records{};
    CameraHint camera;

    int failed() const;
};

struct FullDecoded {
    world::Frame frame;            // 256x128, nearest upsampling of the coarse image
    Grid<std::uint8_t> cells;      // 64x32 six-bit cell values
    SceneHints hints;
    double corruption = 0.0;       // failed records (incl. camera) / 17
};

struct MaskDecoded {
    world::Mask mask;              // 256x128
    Grid<std::uint8_t> cells;      // 64x32 labels
    double corruption = 0.0;       // estimated fraction of wrong cells
};

struct DepthDecoded {
    Grid<double> cells;            // 16x8, meters
    double corruption = 0.0;       // header damage in [0, 1]
};

std::uint8_t crc8(std::span<const std::uint8_t> data);

Payload encode_full(const world::Frame& frame, const world::SceneState& scene, PayloadTag tag = {});
FullDecoded decode_full(const Payload& payload);

Payload encode_mask(const world::Mask& mask);
MaskDecoded decode_mask(const Payload& payload);

Payload encode_depth(const world::DepthMap& depth, PayloadTag tag = {});
DepthDecoded decode_depth(const Payload& payload);

/// 4x4 block averages of a frame, quantized to six bits.
Grid<std::uint8_t> quantize_cells(const world::Frame& frame);
/// 4x4 majority vote of a mask; ties resolve to the smaller label.
Grid<std::uint8_t> mask_cells(const world::Mask& mask);
/// 16x16 block averages of a depth map (feedback resolution).
Grid<double> depth_cells(const world::DepthMap& depth);

int depth_level(double depth_m);
double depth_from_level(int level);

/// Fraction of wrong cells estimated from the isolated-cell rate of a label grid.
double estimate_label_noise(const Grid<std::uint8_t>& labels);

/// Class labels read from the two top bits of six-bit luma cells.
Grid<std::uint8_t> labels_from_luma_cells(const Grid<std::uint8_t>& cells);

} // namespace semtx::codec
