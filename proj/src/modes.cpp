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

#include "semtx/modes.hpp"

#include "semtx/errors.hpp"

namespace semtx {

std::string to_string(TxMode m) {
    switch (m) {
    case TxMode::Full: return "Full";
    case TxMode::Part: return "Part";
    case TxMode::Predict: return "Predict";
    }
    return "?";
}

TxMode tx_mode_from_string(const std::string& s) {
    if (s == "Full") return TxMode::Full;
    if (s == "Part") return TxMode::Part;
    if (s == "Predict") return TxMode::Predict;
    throw InputError("unknown transmission mode: " + s);
}

} // namespace semtx
