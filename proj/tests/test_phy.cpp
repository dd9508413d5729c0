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

#include <array>
#include <bit>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "semtx/errors.hpp"
#include "semtx/phy.hpp"

using namespace semtx;
using namespace semtx::phy;

namespace {

// Independent BER oracle: integrate the Gaussian density over each PAM-4
// decision region with Simpson's rule and weight by Gray label distance.
double simpson_gauss(double lo, double hi, double mean, double sd) {
    lo = std::max(lo, mean - 14.0 * sd);
    hi = std::min(hi, mean + 14.0 * sd);
    if (hi <= lo) return 0.0;
    const int n = 20000;
    const double h = (hi - lo) / n;
    auto pdf = [&](double x) {
        const double z = (x - mean) / sd;
        return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
    };
    double s = pdf(lo) + pdf(hi);
    for (int i = 1; i < n; ++i) s += pdf(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double ber_oracle(double es_n0_db) {
    const double scale = 1.0 / std::sqrt(10.0);
    const std::array<double, 4> level{-3, -1, 1, 3};
    const std::array<int, 4> label{0b00, 0b01, 0b11, 0b10};
    const std::array<double, 5> edge{-1e9, -2, 0, 2, 1e9};
    const double sd = std::sqrt(std::pow(10.0, -es_n0_db / 10.0) / 2.0);
    double errors = 0.0;
    for (int tx = 0; tx < 4; ++tx) {
        for (int rx = 0; rx < 4; ++rx) {
            const double p = simpson_gauss(edge[rx] * scale, edge[rx + 1] * scale, level[tx] * scale, sd);
            errors += p * std::popcount(static_cast<unsigned>(label[tx] ^ label[rx]));
        }
    }
    return errors / 4.0 / 2.0; // average over levels, two bits per axis
}

std::vector<std::uint8_t> all_nibbles() {
    std::vector<std::uint8_t> bits;
    for (int v = 0; v < 16; ++v) {
        for (int k = 3; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((v >> k) & 1));
    }
    return bits;
}

} // namespace

TEST_CASE("gray mapping levels and unit energy") {
    const auto bits = all_nibbles();
    const SymbolBlock s = qam16_modulate(bits);
    REQUIRE(s.symbols.size() == 16);
    double energy = 0.0;
    for (const auto& x : s.symbols) energy += std::norm(x);
    CHECK(energy / 16.0 == doctest::Approx(1.0).epsilon(1e-12));
    // b3 b2 = 00 01 11 10 -> I = -3 -1 +1 +3
    const double k = std::sqrt(10.0);
    CHECK(s.symbols[0b0000].real() * k == doctest::Approx(-3.0));
    CHECK(s.symbols[0b0100].real() * k == doctest::Approx(-1.0));
    CHECK(s.symbols[0b1100].real() * k == doctest::Approx(1.0));
    CHECK(s.symbols[0b1000].real() * k == doctest::Approx(3.0));
    CHECK(s.symbols[0b0010].imag() * k == doctest::Approx(3.0));
    CHECK(s.symbols[0b0011].imag() * k == doctest::Approx(1.0));
}

TEST_CASE("adjacent constellation points differ in one bit") {
    const SymbolBlock s = qam16_modulate(all_nibbles());
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            const double d = std::abs(s.symbols[a] - s.symbols[b]) * std::sqrt(10.0);
            if (std::abs(d - 2.0) < 1e-9) CHECK(std::popcount(static_cast<unsigned>(a ^ b)) == 1);
        }
    }
}

TEST_CASE("modulation round trip and byte packing") {
    const auto bits = all_nibbles();
    const SymbolBlock s = qam16_modulate(bits);
    CHECK(qam16_demodulate(s.symbols) == bits);
    const std::vector<std::uint8_t> bytes{0xA5, 0x01};
    const auto b = bytes_to_bits(bytes);
    const std::vector<std::uint8_t> expect{1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1};
    CHECK(b == expect);
    CHECK(bits_to_bytes(b) == bytes);
    CHECK_THROWS_AS(qam16_modulate(std::vector<std::uint8_t>{1, 0, 1}), InputError);
}

TEST_CASE("closed-form BER agrees with the numerical oracle") {
    for (double snr : {-5.0, 0.0, 5.0, 10.0, 15.0, 20.0}) {
        CAPTURE(snr);
        CHECK(qam16_ber_awgn(snr) == doctest::Approx(ber_oracle(snr)).epsilon(1e-6));
    }
    CHECK(qam16_ber_awgn(5.0) == doctest::Approx(0.164).epsilon(0.01));
    CHECK(qam16_ber_awgn(10.0) == doctest::Approx(0.059).epsilon(0.01));
}

TEST_CASE("measured BER tracks the oracle") {
    Rng rng = make_rng(11, Stream::ForwardLink);
    std::vector<std::uint8_t> payload(50000);
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& b : payload) b = static_cast<std::uint8_t>(byte(rng));
    for (double snr : {6.0, 10.0}) {
        const TransmitResult r = transmit_bytes(payload, snr, LinkConfig{}, rng);
        CAPTURE(snr);
        CHECK(r.report.bits_sent == payload.size() * 8);
        CHECK(r.report.ber == doctest::Approx(ber_oracle(snr)).epsilon(0.05));
    }
}

TEST_CASE("noise-free link is lossless") {
    Rng rng = make_rng(1, Stream::ForwardLink);
    std::vector<std::uint8_t> payload(777);
    for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<std::uint8_t>(i * 37);
    LinkConfig ls;
    ls.estimation = Estimation::LeastSquares;
    for (const LinkConfig& cfg : {LinkConfig{}, ls}) {
        const TransmitResult r = transmit_bytes(payload, 200.0, cfg, rng);
        CHECK(r.bytes == payload);
        CHECK(r.report.bit_errors == 0);
    }
}

TEST_CASE("least-squares estimate is exact for channels linear in frequency") {
    LinkConfig cfg;
    cfg.estimation = Estimation::LeastSquares;
    std::vector<cplx> h(64), y(64);
    for (int k = 0; k < 64; ++k) {
        h[k] = cplx(0.5 + 0.01 * k, -0.2 + 0.003 * k);
        y[k] = h[k] * kPilot;
    }
    const auto est = estimate_ls(y, cfg);
    // Pilots at 0, 8, ..., 56: subcarriers past 56 use extrapolation.
    for (int k = 0; k < 64; ++k) CHECK(std::abs(est[k] - h[k]) < 1e-12);
}

TEST_CASE("symbol count with pilots") {
    LinkConfig cfg;
    cfg.estimation = Estimation::LeastSquares;
    CHECK(cfg.pilots_per_block() == 8);
    CHECK(cfg.data_per_block() == 56);
    CHECK(transmitted_symbol_count(56, cfg) == 64);
    CHECK(transmitted_symbol_count(57, cfg) == 128);
    CHECK(transmitted_symbol_count(4096, cfg) == 74 * 64);
    CHECK(transmitted_symbol_count(4096, LinkConfig{}) == 4096);
}

TEST_CASE("equalizer floors vanishing estimates") {
    std::vector<cplx> y{cplx(1, 0), cplx(2, 0)};
    std::vector<cplx> h{cplx(0, 0), cplx(2, 0)};
    std::uint64_t floored = 0;
    const SymbolBlock out = equalize(y, h, &floored);
    CHECK(floored == 1);
    CHECK(std::isfinite(out.symbols[0].real()));
    CHECK(out.symbols[1] == cplx(1, 0));
}

TEST_CASE("rayleigh link is deterministic per seed") {
    LinkConfig cfg;
    cfg.fading = Fading::RayleighBlock;
    cfg.estimation = Estimation::LeastSquares;
    std::vector<std::uint8_t> payload(512, 0x3C);
    Rng a = make_rng(5, Stream::ForwardLink);
    Rng b = make_rng(5, Stream::ForwardLink);
    CHECK(transmit_bytes(payload, 10.0, cfg, a).bytes == transmit_bytes(payload, 10.0, cfg, b).bytes);
}

TEST_CASE("invalid link configurations") {
    LinkConfig cfg;
    cfg.pilot_every = 7;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    Rng rng = make_rng(0, Stream::ForwardLink);
    CHECK_THROWS_AS(transmit_bytes(std::vector<std::uint8_t>{}, 5.0, LinkConfig{}, rng), InputError);
}
