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

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "semimo/external.hpp"
#include "semimo/link_analysis.hpp"
#include "semimo/transceiver.hpp"

using namespace semimo;

namespace {

GrayImage random_image(int w, int h, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_int_distribution<int> level(0, 255);
    GrayImage img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(level(eng));
    return img;
}

std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = coin(eng);
    return bits;
}

}  // namespace

TEST_CASE("bit planes of single pixels") {
    const BitPlaneSource src = split_bit_planes(GrayImage{1, 1, {170}});
    REQUIRE(src.n_streams() == 8);
    const std::array<int, 8> expect{0, 1, 0, 1, 0, 1, 0, 1};
    for (int k = 0; k < 8; ++k) CHECK(src.planes[k][0] == expect[k]);
    const BitPlaneSource zero = split_bit_planes(GrayImage{1, 1, {0}});
    for (const auto& plane : zero.planes) CHECK(plane[0] == 0);
}

TEST_CASE("bit-plane roundtrip and combiner weights") {
    const GrayImage img = random_image(64, 64, 5);
    const BitPlaneSource src = split_bit_planes(img);
    for (const auto& plane : src.planes) CHECK(plane.size() == 64u * 64u);
    CHECK(combine_bit_planes(src) == img);

    BitPlaneSource ones{4, 2, std::vector<std::vector<std::uint8_t>>(8, std::vector<std::uint8_t>(8, 1))};
    for (auto p : combine_bit_planes(ones).pixels) CHECK(p == 255);

    BitPlaneSource msb = split_bit_planes(GrayImage{3, 1, {0, 0, 0}});
    std::fill(msb.planes[7].begin(), msb.planes[7].end(), 1);
    for (auto p : combine_bit_planes(msb).pixels) CHECK(p == 128);
}

TEST_CASE("bit-plane errors") {
    CHECK_THROWS_AS(split_bit_planes(GrayImage{1, 1, {3}}, 4), std::invalid_argument);
    BitPlaneSource bad = split_bit_planes(GrayImage{2, 1, {1, 2}});
    bad.planes[3].pop_back();
    CHECK_THROWS_AS(combine_bit_planes(bad), std::invalid_argument);
}

TEST_CASE("constellations have unit average energy") {
    for (int m : {4, 16, 64}) {
        const QamConstellation qam(m);
        double energy = 0.0;
        for (const auto& p : qam.points()) energy += std::norm(p);
        CHECK(std::abs(energy / m - 1.0) < 1e-12);
    }
    CHECK_THROWS(QamConstellation(8));
    CHECK_THROWS(QamConstellation(2));
}

TEST_CASE("Gray labeling: nearest axis neighbours differ in one bit") {
    for (int m : {4, 16, 64}) {
        const QamConstellation qam(m);
        const auto& pts = qam.points();
        double spacing = 1e9;
        for (std::size_t a = 0; a < pts.size(); ++a) {
            for (std::size_t b = a + 1; b < pts.size(); ++b) spacing = std::min(spacing, std::abs(pts[a] - pts[b]));
        }
        int pairs = 0;
        for (std::size_t a = 0; a < pts.size(); ++a) {
            for (std::size_t b = a + 1; b < pts.size(); ++b) {
                const Complex d = pts[a] - pts[b];
                const bool axis_neighbour = std::abs(std::abs(d) - spacing) < 1e-12 &&
                                            (std::abs(d.real()) < 1e-12 || std::abs(d.imag()) < 1e-12);
                if (!axis_neighbour) continue;
                ++pairs;
                CHECK(std::popcount(static_cast<unsigned>(a ^ b)) == 1);
            }
        }
        const int side = static_cast<int>(std::lround(std::sqrt(m)));
        CHECK(pairs == 2 * side * (side - 1));
    }
}

TEST_CASE("slicer agrees with brute-force minimum distance") {
    for (int m : {4, 16, 64}) {
        const QamConstellation qam(m);
        std::mt19937_64 eng(m);
        std::normal_distribution<double> g(0.0, 0.8);
        for (int i = 0; i < 5000; ++i) {
            const Complex y(g(eng), g(eng));
            std::size_t best = 0;
            for (std::size_t c = 1; c < qam.points().size(); ++c) {
                if (std::abs(y - qam.points()[c]) < std::abs(y - qam.points()[best])) best = c;
            }
            CHECK(qam.slice(y) == best);
        }
    }
}

TEST_CASE("noiseless modulation roundtrip") {
    const QamConstellation qam4(4);
    const auto bits = random_bits(10000, 1);
    const ModulatedStream s = qam_modulate(bits, qam4);
    CHECK(s.pad_bits == 0);
    CHECK(s.symbols.size() == 5000);
    CHECK(qam_demodulate(s.symbols, qam4, s.pad_bits) == bits);

    const QamConstellation qam16(16);
    const auto odd = random_bits(1001, 2);
    const ModulatedStream t = qam_modulate(odd, qam16);
    CHECK(t.pad_bits == 3);
    CHECK(qam_demodulate(t.symbols, qam16, t.pad_bits) == odd);
}

TEST_CASE("ZF with perfect CSI and no noise is error-free") {
    const GrayImage img = random_image(32, 32, 9);
    const ChannelSet ch = draw_channel_set(16, 8, 0.0, SeedSpec{1, 0});
    const FrameResult r = transmit_frame(split_bit_planes(img), ch, zf_precoder(ch.h_known), 1.0, 0.0,
                                         QamConstellation(4), SeedSpec{2, 0});
    for (double b : r.ber) CHECK(b == 0.0);
    CHECK(r.image == img);
    CHECK(r.received.planes.size() == 8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(r.received.planes[k].size() == img.size());
}

TEST_CASE("frames are deterministic for fixed seeds") {
    const GrayImage img = random_image(32, 32, 10);
    const ChannelSet ch = draw_channel_set(16, 8, 0.05, SeedSpec{3, 0});
    const Precoder mf = mf_precoder(ch.h_known);
    const auto a = transmit_frame(split_bit_planes(img), ch, mf, 5.0, 1.0, QamConstellation(4), SeedSpec{4, 1});
    const auto b = transmit_frame(split_bit_planes(img), ch, mf, 5.0, 1.0, QamConstellation(4), SeedSpec{4, 1});
    const auto c = transmit_frame(split_bit_planes(img), ch, mf, 5.0, 1.0, QamConstellation(4), SeedSpec{4, 2});
    CHECK(a.image == b.image);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.image.pixels != c.image.pixels);
}

TEST_CASE("noise blocks: block size does not change the statistics contract") {
    const GrayImage img = random_image(64, 64, 11);
    const ChannelSet ch = draw_channel_set(16, 8, 0.0, SeedSpec{5, 0});
    const Precoder zf = zf_precoder(ch.h_known);
    FrameOptions small;
    small.block_symbols = 100;
    const auto r = transmit_frame(split_bit_planes(img), ch, zf, 4.0, 1.0, QamConstellation(4), SeedSpec{6, 0}, small);
    CHECK(r.overall_ber() > 0.0);
    CHECK(r.overall_ber() < 0.5);
    FrameOptions zero;
    zero.block_symbols = 0;
    CHECK_THROWS(transmit_frame(split_bit_planes(img), ch, zf, 4.0, 1.0, QamConstellation(4), SeedSpec{6, 0}, zero));
}

TEST_CASE("stream/user mismatch is rejected") {
    const ChannelSet ch = draw_channel_set(8, 4, 0.0, SeedSpec{1, 0});
    CHECK_THROWS_AS(transmit_frame(split_bit_planes(random_image(4, 4, 1)), ch, mf_precoder(ch.h_known), 1.0,
                                   1.0, QamConstellation(4), SeedSpec{}),
                    std::invalid_argument);
}

TEST_CASE("MF with co-linear users is interference limited") {
    // Two users share the channel (1, 0): after equalization each sees its
    // own symbol plus an equal-power co-channel symbol, SINR -> 1.
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 0) = 1.0;
    h(0, 1) = 1.0;
    const ChannelSet ch{2, 2, h, h, 0.0};
    BitPlaneSource src{200, 100, {random_bits(20000, 3), random_bits(20000, 4)}};
    const double floor = q_function(qam_params(4).beta * 1.0);
    for (double p : {10.0, 1e4}) {
        const FrameResult r = transmit_frame(src, ch, mf_precoder(h), p, 1.0, QamConstellation(4), SeedSpec{7, 0});
        for (double b : r.ber) CHECK(b >= floor);
    }
}

TEST_CASE("MF shows an interference floor where ZF does not") {
    const GrayImage img = random_image(64, 64, 12);
    const ChannelSet ch = draw_channel_set(16, 8, 0.0, SeedSpec{8, 0});
    const double p = 1e4;  // 40 dB
    const LinkBudget mf_lb = link_budget(ch, mf_precoder(ch.h_known), p, 1.0);
    for (double i : mf_lb.i_precode) REQUIRE(i > 0.1 * p);
    const auto mf = transmit_frame(split_bit_planes(img), ch, mf_precoder(ch.h_known), p, 1.0, QamConstellation(4), SeedSpec{9, 0});
    const auto zf = transmit_frame(split_bit_planes(img), ch, zf_precoder(ch.h_known), p, 1.0, QamConstellation(4), SeedSpec{9, 0});
    CHECK(mf.overall_ber() > 10.0 * zf.overall_ber());
    CHECK(mf.overall_ber() > 1e-3);
}

TEST_CASE("vanishing effective gain marks the stream undetectable") {
    CMatrix known(2, 1), truth(2, 1);
    known << 1.0, 0.0;
    truth << 0.0, 1.0;
    const ChannelSet ch{2, 1, truth, known, 1.0};
    const BitPlaneSource src{100, 1, {random_bits(100, 5)}};
    const FrameResult r = transmit_frame(src, ch, mf_precoder(known), 1.0, 0.1, QamConstellation(4), SeedSpec{});
    CHECK(r.undetectable[0]);
    CHECK(r.ber[0] == 0.5);
    CHECK(r.received.planes[0].size() == 100);
}

TEST_CASE("known-gain equalizer equals true-gain equalizer under perfect CSI") {
    const GrayImage img = random_image(32, 32, 13);
    const ChannelSet ch = draw_channel_set(16, 8, 0.0, SeedSpec{10, 0});
    const Precoder mf = mf_precoder(ch.h_known);
    FrameOptions known;
    known.equalizer = Equalizer::kKnownGain;
    const auto a = transmit_frame(split_bit_planes(img), ch, mf, 8.0, 1.0, QamConstellation(4), SeedSpec{1, 1});
    const auto b = transmit_frame(split_bit_planes(img), ch, mf, 8.0, 1.0, QamConstellation(4), SeedSpec{1, 1}, known);
    CHECK(a.image == b.image);
}

TEST_CASE("PGM roundtrip and malformed input") {
    const GrayImage img = synthetic_test_image(37, 23);
    const auto path = scratch_path("roundtrip", ".pgm");
    write_pgm(path, img);
    CHECK(read_pgm(path) == img);

    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n# comment\n4 4\n255\n" << std::string(16, 'A');
    }
    const GrayImage commented = read_pgm(path);
    CHECK(commented.width == 4);
    CHECK(commented.pixels[15] == 'A');

    {
        std::ofstream out(path, std::ios::binary);
        out << "P5\n4 4\n255\nshort";
    }
    CHECK_THROWS(read_pgm(path));
    {
        std::ofstream out(path, std::ios::binary);
        out << "P2\n1 1\n255\n7\n";
    }
    CHECK_THROWS(read_pgm(path));
    std::filesystem::remove(path);
    CHECK_THROWS(read_pgm(path));
}

TEST_CASE("synthetic test image is deterministic and varied") {
    const GrayImage a = synthetic_test_image(64, 64);
    CHECK(a == synthetic_test_image(64, 64));
    const auto [lo, hi] = std::minmax_element(a.pixels.begin(), a.pixels.end());
    CHECK(*lo < 50);
    CHECK(*hi > 200);
}
