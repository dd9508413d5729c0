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

#include "semtx/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "semtx/errors.hpp"

namespace semtx::metrics {

double mse(const Grid<double>& a, const Grid<double>& b) {
    if (!a.same_shape(b)) throw InputError("mse: frame dimensions differ");
    if (a.size() == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

double psnr_from_mse(double m) {
    if (m <= 0.0) return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(m);
}

double psnr(const Grid<double>& a, const Grid<double>& b) { return psnr_from_mse(mse(a, b)); }

double miou(const Grid<std::uint8_t>& a, const Grid<std::uint8_t>& b, int n_classes) {
    if (!a.same_shape(b)) throw InputError("miou: mask dimensions differ");
    std::vector<std::size_t> inter(n_classes, 0);
    std::vector<std::size_t> uni(n_classes, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int la = a.data()[i];
        const int lb = b.data()[i];
        if (la == lb) {
            if (la < n_classes) {
                ++inter[la];
                ++uni[la];
            }
        } else {
            if (la < n_classes) ++uni[la];
            if (lb < n_classes) ++uni[lb];
        }
    }
    double sum = 0.0;
    int counted = 0;
    for (int c = 0; c < n_classes; ++c) {
        if (uni[c] == 0) continue;
        sum += static_cast<double>(inter[c]) / static_cast<double>(uni[c]);
        ++counted;
    }
    return counted == 0 ? 1.0 : sum / counted;
}

} // namespace semtx::metrics
