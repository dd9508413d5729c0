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
#include <random>

namespace semtx {

using Rng = std::mt19937_64;

/// Independent random streams of one session. Each consumer owns its stream so
/// that strategies compared on the same seed see the same world and predictor noise.
enum class Stream : std::uint64_t {
    World = 1,
    Predictor = 2,
    ForwardLink = 3,
    FeedbackLink = 4,
    Reference = 5,
};

inline Rng make_rng(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), 0x5e37u};
    return Rng(seq);
}

} // namespace semtx
