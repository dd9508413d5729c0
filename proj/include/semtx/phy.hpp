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

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "semtx/rng.hpp"

namespace semtx::phy {

using cplx = std::complex<double>;

enum class Fading { UnitFlat, RayleighBlock };
enum class Estimation { Perfect, LeastSquares };

/// OFDM link setup. Pilots sit on subcarriers 0, pilot_every, 2*pilot_every, ...
/// and are only inserted when estimation is LeastSquares.
struct LinkConfig {
    int num_subcarriers = 64;
    int pilot_every = 8;
    Fading fading = Fading::UnitFlat;
    Estimation estimation = Estimation::Perfect;

    void validate() const;
    int pilots_per_block() const;
    int data_per_block() const;
};

/// 16-QAM symbols with unit average energy.
struct SymbolBlock {
    std::vector<cplx> symbols;
};

struct LinkReport {
    std::uint64_t bits_sent = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double snr_db = 0.0;
    std::uint64_t symbols_sent = 0;
    /// Channel estimates that were replaced by the 1e-6 magnitude floor.
    std::uint64_t floored_estimates = 0;
};

inline const cplx kPilot = cplx(3.0, 3.0) / std::sqrt(10.0);

/// Gray 16-QAM: b3 b2 select I, b1 b0 select Q; per axis 00,01,11,10 -> -3,-1,+1,+3.
/// Bits are given one per element (0/1). Size must be a multiple of 4.
SymbolBlock qam16_modulate(std::span<const std::uint8_t> bits);

/// Hard-decision inverse of qam16_modulate.
std::vector<std::uint8_t> qam16_demodulate(std::span<const cplx> symbols);

/// MSB-first byte unpacking / packing.
std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits);

struct ChannelOutput {
    SymbolBlock received;
    std::vector<cplx> gains;
};

/// y = h * x + z with noise variance 10^(-snr_db/10) per complex symbol (Es = 1).
/// RayleighBlock draws one CN(0,1) gain per subcarrier for each block of
/// num_subcarriers consecutive symbols.
ChannelOutput apply_channel(const SymbolBlock& x, const LinkConfig& cfg, double snr_db, Rng& rng);

/// Element-wise y / h_hat. Estimates with magnitude below 1e-6 are floored;
/// the number of floored entries is added to *floored when given.
SymbolBlock equalize(std::span<const cplx> y, std::span<const cplx> h_hat,
                     std::uint64_t* floored = nullptr);

/// Least-squares estimate over one OFDM block: y/pilot at pilot subcarriers,
/// linear interpolation in between and linear extrapolation past the last pilot.
std::vector<cplx> estimate_ls(std::span<const cplx> y_block, const LinkConfig& cfg);

/// Number of channel symbols used to carry data_symbols data symbols.
std::uint64_t transmitted_symbol_count(std::uint64_t data_symbols, const LinkConfig& cfg);

struct TransmitResult {
    std::vector<std::uint8_t> bytes;
    LinkReport report;
};

/// Full byte-level link: bits, 16-QAM, OFDM blocks, channel, estimation,
/// equalization, hard demodulation and repacking.
TransmitResult transmit_bytes(std::span<const std::uint8_t> payload, double snr_db,
                              const LinkConfig& cfg, Rng& rng);

/// Closed-form bit error rate of Gray 16-QAM on AWGN at the given Es/N0.
double qam16_ber_awgn(double es_n0_db);

} // namespace semtx::phy
