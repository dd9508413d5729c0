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

#include "semtx/phy.hpp"

#include <array>
#include <cmath>

#include "semtx/errors.hpp"

namespace semtx::phy {

namespace {

const double kScale = 1.0 / std::sqrt(10.0);

// Gray level for a two-bit pair (msb, lsb): 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
constexpr std::array<double, 4> kLevel = {-3.0, -1.0, 3.0, 1.0};

int pair_from_level(double v) {
    // Decision thresholds at -2, 0, +2 (in unscaled units).
    if (v < -2.0) return 0b00;
    if (v < 0.0) return 0b01;
    if (v < 2.0) return 0b11;
    return 0b10;
}

} // namespace

void LinkConfig::validate() const {
    if (num_subcarriers < 2) {
        throw ConfigError("link.num_subcarriers must be at least 2");
    }
    if (pilot_every < 1 || num_subcarriers % pilot_every != 0) {
        throw ConfigError("link.pilot_every must divide link.num_subcarriers");
    }
    if (estimation == Estimation::LeastSquares && num_subcarriers / pilot_every < 2) {
        throw ConfigError("least-squares estimation needs at least two pilots per block");
    }
}

int LinkConfig::pilots_per_block() const {
    return estimation == Estimation::LeastSquares ? num_subcarriers / pilot_every : 0;
}

int LinkConfig::data_per_block() const { return num_subcarriers - pilots_per_block(); }

SymbolBlock qam16_modulate(std::span<const std::uint8_t> bits) {
    if (bits.size() % 4 != 0) {
        throw InputError("qam16_modulate: bit count must be a multiple of 4");
    }
    SymbolBlock out;
    out.symbols.reserve(bits.size() / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        const int i_pair = ((bits[i] & 1) << 1) | (bits[i + 1] & 1);
        const int q_pair = ((bits[i + 2] & 1) << 1) | (bits[i + 3] & 1);
        out.symbols.emplace_back(kLevel[i_pair] * kScale, kLevel[q_pair] * kScale);
    }
    return out;
}

std::vector<std::uint8_t> qam16_demodulate(std::span<const cplx> symbols) {
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * 4);
    for (const cplx& s : symbols) {
        const int i_pair = pair_from_level(s.real() / kScale);
        const int q_pair = pair_from_level(s.imag() / kScale);
        bits.push_back(static_cast<std::uint8_t>(i_pair >> 1));
        bits.push_back(static_cast<std::uint8_t>(i_pair & 1));
        bits.push_back(static_cast<std::uint8_t>(q_pair >> 1));
        bits.push_back(static_cast<std::uint8_t>(q_pair & 1));
    }
    return bits;
}

std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes) {
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes) {
        for (int k = 7; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((b >> k) & 1));
    }
    return bits;
}

std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] & 1) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return bytes;
}

ChannelOutput apply_channel(const SymbolBlock& x, const LinkConfig& cfg, double snr_db, Rng& rng) {
    const std::size_t n = x.symbols.size();
    const std::size_t k = static_cast<std::size_t>(cfg.num_subcarriers);
    ChannelOutput out;
    out.gains.assign(n, cplx(1.0, 0.0));
    if (cfg.fading == Fading::RayleighBlock) {
        std::normal_distribution<double> g(0.0, std::sqrt(0.5));
        for (std::size_t i = 0; i < n; ++i) {
            if (i % k == 0) {
                // one gain per subcarrier for this block
                for (std::size_t j = i; j < std::min(n, i + k); ++j) {
                    const double re = g(rng);
                    const double im = g(rng);
                    out.gains[j] = cplx(re, im);
                }
            }
        }
    }
    const double n0 = std::pow(10.0, -snr_db / 10.0);
    std::normal_distribution<double> noise(0.0, std::sqrt(n0 / 2.0));
    out.received.symbols.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = noise(rng);
        const double im = noise(rng);
        out.received.symbols[i] = out.gains[i] * x.symbols[i] + cplx(re, im);
    }
    return out;
}

SymbolBlock equalize(std::span<const cplx> y, std::span<const cplx> h_hat, std::uint64_t* floored) {
    if (y.size() != h_hat.size()) {
        throw InputError("equalize: received block and channel estimate differ in length");
    }
    constexpr double kFloor = 1e-6;
    SymbolBlock out;
    out.symbols.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        cplx h = h_hat[i];
        if (std::abs(h) < kFloor) {
            h = std::abs(h) > 0.0 ? h * (kFloor / std::abs(h)) : cplx(kFloor, 0.0);
            if (floored) ++*floored;
        }
        out.symbols[i] = y[i] / h;
    }
    return out;
}

std::vector<cplx> estimate_ls(std::span<const cplx> y_block, const LinkConfig& cfg) {
    const int k = cfg.num_subcarriers;
    const int step = cfg.pilot_every;
    if (static_cast<int>(y_block.size()) != k) {
        throw InputError("estimate_ls: block length must equal num_subcarriers");
    }
    const int pilots = k / step;
    std::vector<cplx> at_pilot(pilots);
    for (int p = 0; p < pilots; ++p) at_pilot[p] = y_block[p * step] / kPilot;

    std::vector<cplx> h(k);
    for (int sc = 0; sc < k; ++sc) {
        int left = std::min(sc / step, pilots - 2);
        const double t = static_cast<double>(sc - left * step) / step;
        h[sc] = at_pilot[left] + (at_pilot[left + 1] - at_pilot[left]) * t;
    }
    return h;
}

std::uint64_t transmitted_symbol_count(std::uint64_t data_symbols, const LinkConfig& cfg) {
    const std::uint64_t per_block = static_cast<std::uint64_t>(cfg.data_per_block());
    const std::uint64_t blocks = (data_symbols + per_block - 1) / per_block;
    return blocks * static_cast<std::uint64_t>(cfg.num_subcarriers);
}

TransmitResult transmit_bytes(std::span<const std::uint8_t> payload, double snr_db,
                              const LinkConfig& cfg, Rng& rng) {
    if (payload.empty()) {
        throw InputError("transmit_bytes: empty payload");
    }
    cfg.validate();
    const auto bits = bytes_to_bits(payload);
    const SymbolBlock data = qam16_modulate(bits);

    const int k = cfg.num_subcarriers;
    const bool with_pilots = cfg.estimation == Estimation::LeastSquares;
    const std::uint64_t total = transmitted_symbol_count(data.symbols.size(), cfg);
    const cplx filler = cplx(-3.0, -3.0) * kScale;

    // Frame assembly; data_pos maps each data symbol to its channel slot.
    SymbolBlock tx;
    tx.symbols.resize(total, filler);
    std::vector<std::size_t> data_pos;
    data_pos.reserve(data.symbols.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < total; ++i) {
        const int sc = static_cast<int>(i % k);
        if (with_pilots && sc % cfg.pilot_every == 0) {
            tx.symbols[i] = kPilot;
        } else if (next < data.symbols.size()) {
            tx.symbols[i] = data.symbols[next++];
            data_pos.push_back(i);
        }
    }

    ChannelOutput ch = apply_channel(tx, cfg, snr_db, rng);

    std::vector<cplx> h_hat;
    if (with_pilots) {
        h_hat.reserve(total);
        for (std::size_t b = 0; b < total; b += k) {
            const auto est = estimate_ls(std::span<const cplx>(ch.received.symbols).subspan(b, k), cfg);
            h_hat.insert(h_hat.end(), est.begin(), est.end());
        }
    } else {
        h_hat = ch.gains;
    }

    LinkReport report;
    const SymbolBlock eq = equalize(ch.received.symbols, h_hat, &report.floored_estimates);
    std::vector<cplx> rx_data;
    rx_data.reserve(data_pos.size());
    for (std::size_t pos : data_pos) rx_data.push_back(eq.symbols[pos]);

    const auto rx_bits = qam16_demodulate(rx_data);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (rx_bits[i] != bits[i]) ++report.bit_errors;
    }
    report.bits_sent = bits.size();
    report.ber = static_cast<double>(report.bit_errors) / static_cast<double>(report.bits_sent);
    report.snr_db = snr_db;
    report.symbols_sent = total;
    return {bits_to_bytes(rx_bits), report};
}

double qam16_ber_awgn(double es_n0_db) {
    const double es_n0 = std::pow(10.0, es_n0_db / 10.0);
    const double a = std::sqrt(es_n0 / 5.0);
    auto q = [](double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); };
    return (3.0 * q(a) + 2.0 * q(3.0 * a) - q(5.0 * a)) / 4.0;
}

} // namespace semtx::phy
