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

#include "semtx/grid.hpp"

namespace semtx::metrics {

/// Mean squared error over all pixels. Throws InputError on shape mismatch.
double mse(const Grid<double>& a, const Grid<double>& b);

/// PSNR with peak 1.0; +infinity for identical frames.
double psnr_from_mse(double mse);
double psnr(const Grid<double>& a, const Grid<double>& b);

/// Mean over classes of |A and B| / |A or B|; classes absent from both maps are skipped.
/// Two maps without any label in [0, n_classes) score 1.
double miou(const Grid<std::uint8_t>& a, const Grid<std::uint8_t>& b, int n_classes);

} // namespace semtx::metrics
