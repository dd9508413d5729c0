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

#include "semtx/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "semtx/errors.hpp"

namespace semtx::codec {

namespace {

using world::kFrameHeight;
using world::kFrameWidth;

void put_u16(std::uint8_t* p, std::uint16_t v) {
    p[0] = static_cast<std::uint8_t>(v >> 8);
    p[1] = static_cast<std::uint8_t>(v);
}

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>((p[0] << 8) | p[1]);
}

void put_u32(std::uint8_t* p, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (24 - 8 * i));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
           std::uint32_t{p[3]};
}

template <typename Int>
Int quantize(double value, double step, const char* field) {
    const double q = std::round(value / step);
    if (q < std::numeric_limits<Int>::min() || q > std::numeric_limits<Int>::max()) {
        throw InputError(std::string("descriptor field out of range: ") + field);
    }
    return static_cast<Int>(q);
}

// MSB-first packing of fixed-width unsigned values.
void pack_bits(std::uint8_t* out, const std::vector<std::uint8_t>& values, int width) {
    std::size_t bit = 0;
    for (std::uint8_t v : values) {
        for (int k = width - 1; k >= 0; --k, ++bit) {
            if ((v >> k) & 1) out[bit / 8] |= static_cast<std::uint8_t>(0x80u >> (bit % 8));
        }
    }
}

std::vector<std::uint8_t> unpack_bits(const std::uint8_t* in, std::size_t count, int width) {
    std::vector<std::uint8_t> values(count, 0);
    std::size_t bit = 0;
    for (std::size_t i = 0; i < count; ++i) {
        std::uint8_t v = 0;
        for (int k = 0; k < width; ++k, ++bit) {
            v = static_cast<std::uint8_t>((v << 1) | ((in[bit / 8] >> (7 - bit % 8)) & 1));
        }
        values[i] = v;
    }
    return values;
}

void write_header(std::uint8_t* p, PayloadKind kind, PayloadTag tag) {
    p[0] = kMagic;
    p[1] = static_cast<std::uint8_t>(kind);
    put_u16(p + 2, tag.slot);
    put_u16(p + 4, tag.sequence);
}

void check_payload(const Payload& payload, PayloadKind kind) {
    if (payload.bytes.size() != payload_size(kind)) {
        throw InputError("payload length " + std::to_string(payload.bytes.size()) +
                         " does not match its kind (expected " +
                         std::to_string(payload_size(kind)) + ")");
    }
}

void check_frame_shape(int w, int h, const char* what) {
    if (w != kFrameWidth || h != kFrameHeight) {
        throw InputError(std::string(what) + " must be 256x128");
    }
}

void encode_record(std::uint8_t* r, const world::SceneObject* obj) {
    if (obj) {
        r[0] = 1;
        r[1] = static_cast<std::uint8_t>(obj->id);
        r[2] = static_cast<std::uint8_t>(obj->cls);
        put_u16(r + 3, static_cast<std::uint16_t>(quantize<std::int16_t>(obj->center.x, kCenterStep, "center.x")));
        put_u16(r + 5, static_cast<std::uint16_t>(quantize<std::int16_t>(obj->center.y, kCenterStep, "center.y")));
        r[7] = quantize<std::uint8_t>(obj->width_m, kSizeStep, "width");
        r[8] = quantize<std::uint8_t>(obj->height_m, kSizeStep, "height");
        put_u16(r + 9, static_cast<std::uint16_t>(quantize<std::int16_t>(obj->velocity_mps.x, kVelocityStep, "velocity.x")));
        put_u16(r + 11, static_cast<std::uint16_t>(quantize<std::int16_t>(obj->velocity_mps.y, kVelocityStep, "velocity.y")));
    }
    r[15] = crc8({r, kRecordBytes - 1});
}

RecordHint decode_record(const std::uint8_t* r) {
    RecordHint hint;
    if (crc8({r, kRecordBytes - 1}) != r[15]) return hint;
    if (r[13] != 0 || r[14] != 0 || r[0] > 1) return hint;
    if (r[0] == 0) {
        hint.valid = std::all_of(r + 1, r + 13, [](std::uint8_t b) { return b == 0; });
        return hint;
    }
    if (r[2] < 1 || r[2] > 3 || r[7] == 0 || r[8] == 0) return hint;
    hint.valid = true;
    hint.present = true;
    auto& o = hint.object;
    o.id = r[1];
    o.cls = static_cast<world::ObjectClass>(r[2]);
    o.center = {static_cast<std::int16_t>(get_u16(r + 3)) * kCenterStep,
                static_cast<std::int16_t>(get_u16(r + 5)) * kCenterStep};
    o.width_m = r[7] * kSizeStep;
    o.height_m = r[8] * kSizeStep;
    o.velocity_mps = {static_cast<std::int16_t>(get_u16(r + 9)) * kVelocityStep,
                      static_cast<std::int16_t>(get_u16(r + 11)) * kVelocityStep};
    return hint;
}

void encode_camera(std::uint8_t* r, const world::Camera& cam) {
    put_u32(r, static_cast<std::uint32_t>(quantize<std::int32_t>(cam.x_m, 1e-3, "camera.x")));
    put_u32(r + 4, static_cast<std::uint32_t>(quantize<std::int32_t>(cam.y_m, 1e-3, "camera.y")));
    put_u32(r + 8, static_cast<std::uint32_t>(quantize<std::int32_t>(cam.heading_rad, 1e-6, "camera.heading")));
    r[15] = crc8({r, kRecordBytes - 1});
}

CameraHint decode_camera(const std::uint8_t* r) {
    CameraHint hint;
    if (crc8({r, kRecordBytes - 1}) != r[15] || r[12] != 0 || r[13] != 0 || r[14] != 0) {
        return hint;
    }
    hint.valid = true;
    hint.camera = {static_cast<std::int32_t>(get_u32(r)) * 1e-3,
                   static_cast<std::int32_t>(get_u32(r + 4)) * 1e-3,
                   static_cast<std::int32_t>(get_u32(r + 8)) * 1e-6};
    return hint;
}

// Labels majority, ties to the smaller label.
std::uint8_t majority(const std::array<int, world::kNumLabels>& counts) {
    int best = 0;
    for (int l = 1; l < world::kNumLabels; ++l) {
        if (counts[l] > counts[best]) best = l;
    }
    return static_cast<std::uint8_t>(best);
}

} // namespace

std::size_t payload_size(PayloadKind kind) {
    switch (kind) {
    case PayloadKind::Full: return kFullBytes;
    case PayloadKind::Mask: return kMaskBytes;
    case PayloadKind::Depth: return kDepthBytes;
    }
    return 0;
}

int SceneHints::failed() const {
    int n = camera.valid ? 0 : 1;
    for (const auto& r : records) n += r.valid ? 0 : 1;
    return n;
}

std::uint8_t crc8(std::span<const std::uint8_t> data) {
    std::uint8_t crc = 0xFF;
    for (std::uint8_t b : data) {
        crc ^= b;
        for (int k = 0; k < 8; ++k) {
            crc = (crc & 0x80) ? static_cast<std::uint8_t>((crc << 1) ^ 0x07)
                               : static_cast<std::uint8_t>(crc << 1);
        }
    }
    return crc;
}

Grid<std::uint8_t> quantize_cells(const world::Frame& frame) {
    check_frame_shape(frame.width(), frame.height(), "frame");
    Grid<std::uint8_t> cells(kCellCols, kCellRows);
    for (int cy = 0; cy < kCellRows; ++cy) {
        for (int cx = 0; cx < kCellCols; ++cx) {
            double sum = 0.0;
            for (int y = 0; y < kCellPx; ++y) {
                for (int x = 0; x < kCellPx; ++x) sum += frame(cx * kCellPx + x, cy * kCellPx + y);
            }
            const double mean = sum / (kCellPx * kCellPx);
            cells(cx, cy) = static_cast<std::uint8_t>(std::clamp(std::lround(mean * 63.0), 0L, 63L));
        }
    }
    return cells;
}

Grid<std::uint8_t> mask_cells(const world::Mask& mask) {
    check_frame_shape(mask.width(), mask.height(), "mask");
    Grid<std::uint8_t> cells(kCellCols, kCellRows);
    for (int cy = 0; cy < kCellRows; ++cy) {
        for (int cx = 0; cx < kCellCols; ++cx) {
            std::array<int, world::kNumLabels> counts{};
            for (int y = 0; y < kCellPx; ++y) {
                for (int x = 0; x < kCellPx; ++x) {
                    const std::uint8_t l = mask(cx * kCellPx + x, cy * kCellPx + y);
                    if (l >= world::kNumLabels) throw InputError("mask label out of range");
                    ++counts[l];
                }
            }
            cells(cx, cy) = majority(counts);
        }
    }
    return cells;
}

Grid<double> depth_cells(const world::DepthMap& depth) {
    check_frame_shape(depth.width(), depth.height(), "depth map");
    Grid<double> cells(kDepthCols, kDepthRows);
    constexpr double n = kDepthCellPx * kDepthCellPx;
    for (int cy = 0; cy < kDepthRows; ++cy) {
        for (int cx = 0; cx < kDepthCols; ++cx) {
            double sum = 0.0;
            for (int y = 0; y < kDepthCellPx; ++y) {
                for (int x = 0; x < kDepthCellPx; ++x) {
                    sum += depth(cx * kDepthCellPx + x, cy * kDepthCellPx + y);
                }
            }
            cells(cx, cy) = sum / n;
        }
    }
    return cells;
}

int depth_level(double depth_m) {
    const double t = std::log(depth_m / world::kMinDepth) / std::log(world::kMaxDepth / world::kMinDepth);
    return static_cast<int>(std::clamp(std::lround(t * (kDepthLevels - 1)), 0L, 63L));
}

double depth_from_level(int level) {
    return world::kMinDepth *
           std::pow(world::kMaxDepth / world::kMinDepth, static_cast<double>(level) / (kDepthLevels - 1));
}

Payload encode_full(const world::Frame& frame, const world::SceneState& scene, PayloadTag tag) {
    check_frame_shape(frame.width(), frame.height(), "frame");
    if (scene.objects.size() > kNumRecords) throw InputError("scene has more than 16 objects");
    Payload p{PayloadKind::Full, std::vector<std::uint8_t>(kFullBytes, 0)};
    std::uint8_t* b = p.bytes.data();
    write_header(b, PayloadKind::Full, tag);
    for (std::size_t i = 0; i < kNumRecords; ++i) {
        const world::SceneObject* obj = i < scene.objects.size() ? &scene.objects[i] : nullptr;
        encode_record(b + kDescriptorOffset + i * kRecordBytes, obj);
    }
    pack_bits(b + kImageOffset, quantize_cells(frame).data(), 6);
    encode_camera(b + kCameraRecordOffset, scene.camera);
    return p;
}

FullDecoded decode_full(const Payload& payload) {
    check_payload(payload, PayloadKind::Full);
    const std::uint8_t* b = payload.bytes.data();
    FullDecoded out;
    for (std::size_t i = 0; i < kNumRecords; ++i) {
        out.hints.records[i] = decode_record(b + kDescriptorOffset + i * kRecordBytes);
    }
    out.hints.camera = decode_camera(b + kCameraRecordOffset);
    out.corruption = static_cast<double>(out.hints.failed()) / (kNumRecords + 1);

    out.cells = Grid<std::uint8_t>(kCellCols, kCellRows);
    out.cells.data() = unpack_bits(b + kImageOffset, static_cast<std::size_t>(kCellCols) * kCellRows, 6);
    out.frame = world::Frame(kFrameWidth, kFrameHeight);
    for (int y = 0; y < kFrameHeight; ++y) {
        for (int x = 0; x < kFrameWidth; ++x) {
            out.frame(x, y) = out.cells(x / kCellPx, y / kCellPx) / 63.0;
        }
    }
    return out;
}

Payload encode_mask(const world::Mask& mask) {
    Payload p{PayloadKind::Mask, std::vector<std::uint8_t>(kMaskBytes, 0)};
    pack_bits(p.bytes.data(), mask_cells(mask).data(), 2);
    return p;
}

MaskDecoded decode_mask(const Payload& payload) {
    check_payload(payload, PayloadKind::Mask);
    MaskDecoded out;
    out.cells = Grid<std::uint8_t>(kCellCols, kCellRows);
    out.cells.data() = unpack_bits(payload.bytes.data(), static_cast<std::size_t>(kCellCols) * kCellRows, 2);
    out.mask = world::Mask(kFrameWidth, kFrameHeight);
    for (int y = 0; y < kFrameHeight; ++y) {
        for (int x = 0; x < kFrameWidth; ++x) out.mask(x, y) = out.cells(x / kCellPx, y / kCellPx);
    }
    out.corruption = estimate_label_noise(out.cells);
    return out;
}

Payload encode_depth(const world::DepthMap& depth, PayloadTag tag) {
    check_frame_shape(depth.width(), depth.height(), "depth map");
    for (double d : depth.data()) {
        if (!(d >= world::kMinDepth && d <= world::kMaxDepth)) {
            throw InputError("depth values must lie in [1, 100] m");
        }
    }
    Payload p{PayloadKind::Depth, std::vector<std::uint8_t>(kDepthBytes, 0)};
    write_header(p.bytes.data(), PayloadKind::Depth, tag);
    const Grid<double> cells = depth_cells(depth);
    std::vector<std::uint8_t> levels;
    levels.reserve(cells.size());
    for (double d : cells.data()) levels.push_back(static_cast<std::uint8_t>(depth_level(d)));
    pack_bits(p.bytes.data() + kDepthHeaderBytes, levels, 6);
    return p;
}

DepthDecoded decode_depth(const Payload& payload) {
    check_payload(payload, PayloadKind::Depth);
    const std::uint8_t* b = payload.bytes.data();
    DepthDecoded out;
    out.cells = Grid<double>(kDepthCols, kDepthRows);
    const auto levels = unpack_bits(b + kDepthHeaderBytes, out.cells.size(), 6);
    for (std::size_t i = 0; i < levels.size(); ++i) out.cells.data()[i] = depth_from_level(levels[i]);
    int bad = 0;
    if (b[0] != kMagic) ++bad;
    if (b[1] != static_cast<std::uint8_t>(PayloadKind::Depth)) ++bad;
    out.corruption = bad / 2.0;
    return out;
}

double estimate_label_noise(const Grid<std::uint8_t>& labels) {
    const int w = labels.width();
    const int h = labels.height();
    if (w == 0 || h == 0) return 0.0;
    std::size_t isolated = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint8_t l = labels(x, y);
            int neighbours = 0;
            bool alone = true;
            const int dx[] = {1, -1, 0, 0};
            const int dy[] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                const int nx = x + dx[k];
                const int ny = y + dy[k];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                ++neighbours;
                if (labels(nx, ny) == l) alone = false;
            }
            if (neighbours >= 2 && alone) ++isolated;
        }
    }
    const double rate = static_cast<double>(isolated) / labels.size();
    // Expected isolated rate for wrong-cell fraction q with uniform replacement.
    auto model = [](double q) {
        const double keep = 1.0 - q / 3.0;
        return q * keep * keep * keep * keep + (1.0 - q) * q * q * q * q;
    };
    constexpr double kMaxNoise = 0.75;
    if (rate >= model(kMaxNoise)) return kMaxNoise;
    double lo = 0.0;
    double hi = kMaxNoise;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (model(mid) < rate ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Grid<std::uint8_t> labels_from_luma_cells(const Grid<std::uint8_t>& cells) {
    Grid<std::uint8_t> labels(cells.width(), cells.height());
    const int horizon_cell = static_cast<int>(world::kHorizonRow) / kCellPx;
    for (int y = 0; y < cells.height(); ++y) {
        for (int x = 0; x < cells.width(); ++x) {
            switch (cells(x, y) >> 4) {
            case 0: labels(x, y) = static_cast<std::uint8_t>(world::ObjectClass::Vehicle); break;
            case 2: labels(x, y) = static_cast<std::uint8_t>(world::ObjectClass::Building); break;
            case 3:
                labels(x, y) = y < horizon_cell ? 0 : static_cast<std::uint8_t>(world::ObjectClass::RoadMarking);
                break;
            default: labels(x, y) = 0; break;
            }
        }
    }
    return labels;
}

} // namespace semtx::codec
