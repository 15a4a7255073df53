// Copyright 2026 The semimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semimo/channel.hpp"
#include "semimo/image.hpp"
#include "semimo/precoding.hpp"

namespace semimo {

/// An 8-bit image split into bit planes. planes[k] holds bit k of every pixel
/// in row-major order, so plane 0 (stream 1) is the LSB with weight 2^0.
struct BitPlaneSource {
    int width = 0;
    int height = 0;
    std::vector<std::vector<std::uint8_t>> planes;

    int n_streams() const noexcept { return static_cast<int>(planes.size()); }
};

/// Only n_streams == 8 is supported.
BitPlaneSource split_bit_planes(const GrayImage& image, int n_streams = 8);

/// pixel = sum_k 2^k plane_k. Throws if any plane length differs from
/// width * height or there are more than 8 planes.
GrayImage combine_bit_planes(const BitPlaneSource& source);

/// Square Gray-labeled M-QAM with unit average energy. A label's first
/// log2(M)/2 bits (MSB first) select the in-phase level, the rest the
/// quadrature level; each axis is Gray coded.
class QamConstellation {
public:
    explicit QamConstellation(int order);

    int order() const noexcept { return order_; }
    int bits_per_symbol() const noexcept { return bits_per_symbol_; }
    const std::vector<Complex>& points() const noexcept { return points_; }

    /// Nearest constellation label (minimum Euclidean distance).
    unsigned slice(Complex y) const noexcept;

private:
    unsigned slice_axis(double v) const noexcept;

    int order_;
    int bits_per_symbol_;
    int levels_;
    double scale_;
    std::vector<Complex> points_;
};

struct ModulatedStream {
    std::vector<Complex> symbols;
    /// Zero bits appended to fill the last symbol.
    int pad_bits = 0;
};

ModulatedStream qam_modulate(std::span<const std::uint8_t> bits, const QamConstellation& qam);

/// Hard-decision demodulation; the last `pad_bits` bits are dropped.
std::vector<std::uint8_t> qam_demodulate(std::span<const Complex> symbols,
                                         const QamConstellation& qam, int pad_bits = 0);

enum class Equalizer {
    kTrueGain,   ///< divide by h_k^H f_k sqrt(p) with the true channel (genie-aided)
    kKnownGain,  ///< divide by the transmitter-side estimate of that gain
};

struct FrameOptions {
    Equalizer equalizer = Equalizer::kTrueGain;
    /// Symbols per noise block; each block draws noise from its own substream.
    int block_symbols = 4096;
};

struct FrameResult {
    BitPlaneSource received;
    GrayImage image;
    std::vector<std::uint64_t> bit_errors;
    std::vector<std::uint64_t> bits;
    /// Per-stream empirical BER; 0.5 for undetectable streams.
    std::vector<double> ber;
    std::vector<bool> undetectable;

    double overall_ber() const;
};

/// Sends plane k on user k through y = H^H F sqrt(p) x + v with the true
/// channel and CN(0, noise_var) noise, then equalizes and slices per user.
FrameResult transmit_frame(const BitPlaneSource& source, const ChannelSet& channel,
                           const Precoder& precoder, double tx_power, double noise_var,
                           const QamConstellation& qam, SeedSpec seed,
                           const FrameOptions& options = {});

}  // namespace semimo
