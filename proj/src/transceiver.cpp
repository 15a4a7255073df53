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

#include "semimo/transceiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace semimo {

BitPlaneSource split_bit_planes(const GrayImage& image, int n_streams) {
    if (n_streams != 8) {
        throw std::invalid_argument("split_bit_planes: only 8 bit planes are supported, got " +
                                    std::to_string(n_streams));
    }
    if (image.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw std::invalid_argument("split_bit_planes: pixel count does not match dimensions");
    }
    BitPlaneSource src;
    src.width = image.width;
    src.height = image.height;
    src.planes.assign(8, std::vector<std::uint8_t>(image.size()));
    for (std::size_t i = 0; i < image.size(); ++i) {
        for (int k = 0; k < 8; ++k) src.planes[k][i] = (image.pixels[i] >> k) & 1U;
    }
    return src;
}

GrayImage combine_bit_planes(const BitPlaneSource& source) {
    if (source.n_streams() > 8) throw std::invalid_argument("combine_bit_planes: more than 8 planes");
    const std::size_t n = static_cast<std::size_t>(source.width) * source.height;
    for (const auto& plane : source.planes) {
        if (plane.size() != n) throw std::invalid_argument("combine_bit_planes: plane length mismatch");
    }
    GrayImage img{source.width, source.height, std::vector<std::uint8_t>(n, 0)};
    for (int k = 0; k < source.n_streams(); ++k) {
        const auto& plane = source.planes[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < n; ++i) {
            img.pixels[i] = static_cast<std::uint8_t>(img.pixels[i] | ((plane[i] & 1U) << k));
        }
    }
    return img;
}

namespace {

unsigned gray_encode(unsigned v) { return v ^ (v >> 1); }

unsigned gray_decode(unsigned g) {
    unsigned v = 0;
    for (; g; g >>= 1) v ^= g;
    return v;
}

}  // namespace

QamConstellation::QamConstellation(int order) : order_(order) {
    if (order < 4 || (order & (order - 1)) != 0) {
        throw std::invalid_argument("QAM order must be a power of two >= 4");
    }
    bits_per_symbol_ = static_cast<int>(std::lround(std::log2(order)));
    if (bits_per_symbol_ % 2 != 0) throw std::invalid_argument("QAM order must be square");
    levels_ = 1 << (bits_per_symbol_ / 2);
    scale_ = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);

    const int half = bits_per_symbol_ / 2;
    const unsigned axis_mask = (1U << half) - 1U;
    points_.resize(static_cast<std::size_t>(order));
    for (unsigned label = 0; label < static_cast<unsigned>(order); ++label) {
        const unsigned li = gray_decode(label >> half);
        const unsigned lq = gray_decode(label & axis_mask);
        points_[label] = Complex((2.0 * li - (levels_ - 1)) * scale_,
                                 (2.0 * lq - (levels_ - 1)) * scale_);
    }
}

unsigned QamConstellation::slice_axis(double v) const noexcept {
    const double level = std::round((v / scale_ + (levels_ - 1)) / 2.0);
    const double clamped = std::clamp(level, 0.0, static_cast<double>(levels_ - 1));
    return gray_encode(static_cast<unsigned>(clamped));
}

unsigned QamConstellation::slice(Complex y) const noexcept {
    const int half = bits_per_symbol_ / 2;
    return (slice_axis(y.real()) << half) | slice_axis(y.imag());
}

ModulatedStream qam_modulate(std::span<const std::uint8_t> bits, const QamConstellation& qam) {
    const auto m = static_cast<std::size_t>(qam.bits_per_symbol());
    ModulatedStream out;
    const std::size_t n_symbols = (bits.size() + m - 1) / m;
    out.pad_bits = static_cast<int>(n_symbols * m - bits.size());
    out.symbols.resize(n_symbols);
    for (std::size_t s = 0; s < n_symbols; ++s) {
        unsigned label = 0;
        for (std::size_t b = 0; b < m; ++b) {
            const std::size_t idx = s * m + b;
            const unsigned bit = idx < bits.size() ? (bits[idx] & 1U) : 0U;
            label = (label << 1) | bit;
        }
        out.symbols[s] = qam.points()[label];
    }
    return out;
}

std::vector<std::uint8_t> qam_demodulate(std::span<const Complex> symbols,
                                         const QamConstellation& qam, int pad_bits) {
    const int m = qam.bits_per_symbol();
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * static_cast<std::size_t>(m));
    for (const Complex& y : symbols) {
        const unsigned label = qam.slice(y);
        for (int b = m - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((label >> b) & 1U));
    }
    if (pad_bits < 0 || static_cast<std::size_t>(pad_bits) > bits.size()) {
        throw std::invalid_argument("qam_demodulate: bad pad length");
    }
    bits.resize(bits.size() - static_cast<std::size_t>(pad_bits));
    return bits;
}

double FrameResult::overall_ber() const {
    std::uint64_t e = 0, n = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        e += bit_errors[k];
        n += bits[k];
    }
    return n ? static_cast<double>(e) / static_cast<double>(n) : 0.0;
}

FrameResult transmit_frame(const BitPlaneSource& source, const ChannelSet& channel,
                           const Precoder& precoder, double tx_power, double noise_var,
                           const QamConstellation& qam, SeedSpec seed,
                           const FrameOptions& options) {
    const int n_users = channel.n_users;
    if (source.n_streams() != n_users) {
        throw std::invalid_argument("transmit_frame: " + std::to_string(source.n_streams()) +
                                    " streams for " + std::to_string(n_users) + " users");
    }
    if (precoder.matrix_f.rows() != channel.n_tx || precoder.matrix_f.cols() != n_users) {
        throw std::invalid_argument("transmit_frame: precoder does not match channel");
    }
    if (!(tx_power > 0.0) || !(noise_var >= 0.0)) {
        throw std::invalid_argument("transmit_frame: need tx_power > 0 and noise_var >= 0");
    }
    if (options.block_symbols < 1) throw std::invalid_argument("transmit_frame: block_symbols < 1");

    // Common symbol clock: every stream padded to the longest one.
    std::vector<ModulatedStream> tx;
    tx.reserve(static_cast<std::size_t>(n_users));
    std::size_t n_symbols = 0;
    for (const auto& plane : source.planes) {
        tx.push_back(qam_modulate(plane, qam));
        n_symbols = std::max(n_symbols, tx.back().symbols.size());
    }
    const auto T = static_cast<Eigen::Index>(n_symbols);
    CMatrix x = CMatrix::Zero(n_users, T);
    for (int k = 0; k < n_users; ++k) {
        const auto& s = tx[static_cast<std::size_t>(k)].symbols;
        for (std::size_t t = 0; t < s.size(); ++t) x(k, static_cast<Eigen::Index>(t)) = s[t];
    }

    const double amp = std::sqrt(tx_power);
    const CMatrix mix = amp * (channel.h_true.adjoint() * precoder.matrix_f);
    std::vector<Complex> eq_gain(static_cast<std::size_t>(n_users));
    if (options.equalizer == Equalizer::kTrueGain) {
        for (int k = 0; k < n_users; ++k) eq_gain[static_cast<std::size_t>(k)] = mix(k, k);
    } else {
        const CMatrix known = amp * (channel.h_known.adjoint() * precoder.matrix_f);
        for (int k = 0; k < n_users; ++k) eq_gain[static_cast<std::size_t>(k)] = known(k, k);
    }

    CMatrix y = mix * x;
    if (noise_var > 0.0) {
        const Eigen::Index block = options.block_symbols;
        for (Eigen::Index b0 = 0, blk = 0; b0 < T; b0 += block, ++blk) {
            const Eigen::Index len = std::min(block, T - b0);
            auto engine = make_engine(seed, Stream::kNoise, static_cast<std::uint64_t>(blk));
            y.middleCols(b0, len) += draw_complex_gaussian(n_users, len, noise_var, engine);
        }
    }

    FrameResult out;
    out.received.width = source.width;
    out.received.height = source.height;
    out.received.planes.resize(static_cast<std::size_t>(n_users));
    out.bit_errors.assign(static_cast<std::size_t>(n_users), 0);
    out.bits.assign(static_cast<std::size_t>(n_users), 0);
    out.ber.assign(static_cast<std::size_t>(n_users), 0.0);
    out.undetectable.assign(static_cast<std::size_t>(n_users), false);

    std::vector<Complex> rx;
    for (int k = 0; k < n_users; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const auto& sent = source.planes[uk];
        auto& got = out.received.planes[uk];
        const auto stream_len = static_cast<Eigen::Index>(tx[uk].symbols.size());

        if (std::abs(eq_gain[uk]) < 1e-12) {
            out.undetectable[uk] = true;
            auto engine = make_engine(seed, Stream::kPayload, uk);
            std::bernoulli_distribution coin(0.5);
            got.resize(sent.size());
            for (auto& bit : got) bit = coin(engine) ? 1 : 0;
        } else {
            rx.resize(static_cast<std::size_t>(stream_len));
            const Complex inv = 1.0 / eq_gain[uk];
            for (Eigen::Index t = 0; t < stream_len; ++t) rx[static_cast<std::size_t>(t)] = y(k, t) * inv;
            got = qam_demodulate(rx, qam, tx[uk].pad_bits);
        }
        std::uint64_t errors = 0;
        for (std::size_t i = 0; i < sent.size(); ++i) errors += (sent[i] != got[i]);
        out.bit_errors[uk] = errors;
        out.bits[uk] = sent.size();
        out.ber[uk] = out.undetectable[uk]
                          ? 0.5
                          : (sent.empty() ? 0.0 : static_cast<double>(errors) / sent.size());
    }
    out.image = combine_bit_planes(out.received);
    return out;
}

}  // namespace semimo
