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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "semimo/channel.hpp"

using namespace semimo;

TEST_CASE("16x8 draw with perfect CSI has identical true and known channels") {
    const ChannelSet ch = draw_channel_set(16, 8, 0.0, SeedSpec{7, 0});
    CHECK(ch.n_tx == 16);
    CHECK(ch.n_users == 8);
    CHECK(ch.h_true.rows() == 16);
    CHECK(ch.h_true.cols() == 8);
    CHECK(ch.h_known.rows() == 16);
    CHECK(ch.h_known.cols() == 8);
    CHECK((ch.h_true.array() == ch.h_known.array()).all());
}

TEST_CASE("draw_channel_set rejects bad dimensions and variances") {
    CHECK_THROWS_AS(draw_channel_set(4, 8, 0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(draw_channel_set(4, 0, 0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(draw_channel_set(4, 2, -0.1, {}), std::invalid_argument);
    CHECK_THROWS_AS(draw_channel_set(4, 2, NAN, {}), std::invalid_argument);
}

TEST_CASE("known channel columns have unit average power") {
    constexpr int kTrials = 100000;
    double sum = 0.0;
    for (int t = 0; t < kTrials; ++t) {
        const ChannelSet ch = draw_channel_set(4, 2, 0.0, SeedSpec{11, static_cast<std::uint64_t>(t)});
        sum += ch.h_known.col(0).squaredNorm() + ch.h_known.col(1).squaredNorm();
    }
    CHECK(sum / (2.0 * kTrials) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("error columns have power N_t * err_var") {
    constexpr int kTrials = 100000;
    double sum = 0.0;
    for (int t = 0; t < kTrials; ++t) {
        const ChannelSet ch = draw_channel_set(8, 4, 0.25, SeedSpec{12, static_cast<std::uint64_t>(t)});
        sum += ch.error().colwise().squaredNorm().sum();
    }
    CHECK(sum / (4.0 * kTrials) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("circular symmetry and independence of known channel and error") {
    constexpr int kTrials = 100000;
    constexpr int kTx = 4, kUsers = 2;
    const double err_var = 0.5;
    Eigen::MatrixXcd mean_known = Eigen::MatrixXcd::Zero(kTx, kUsers);
    Eigen::MatrixXcd mean_err = Eigen::MatrixXcd::Zero(kTx, kUsers);
    double s_ri = 0, s_ke = 0, s_rr = 0, s_ii = 0, s_ee = 0;
    for (int t = 0; t < kTrials; ++t) {
        const ChannelSet ch = draw_channel_set(kTx, kUsers, err_var, SeedSpec{13, static_cast<std::uint64_t>(t)});
        const CMatrix e = ch.error();
        mean_known += ch.h_known;
        mean_err += e;
        const double re = ch.h_known(0, 0).real(), im = ch.h_known(0, 0).imag();
        const double er = e(0, 0).real();
        s_ri += re * im;
        s_ke += re * er;
        s_rr += re * re;
        s_ii += im * im;
        s_ee += er * er;
    }
    mean_known /= kTrials;
    mean_err /= kTrials;
    // per real component std: sqrt(var / 2)
    const double bound_known = 3.0 * std::sqrt(1.0 / kTx / 2.0) / std::sqrt(double(kTrials));
    const double bound_err = 3.0 * std::sqrt(err_var / 2.0) / std::sqrt(double(kTrials));
    for (int r = 0; r < kTx; ++r) {
        for (int c = 0; c < kUsers; ++c) {
            CHECK(std::abs(mean_known(r, c).real()) < bound_known);
            CHECK(std::abs(mean_known(r, c).imag()) < bound_known);
            CHECK(std::abs(mean_err(r, c).real()) < bound_err);
            CHECK(std::abs(mean_err(r, c).imag()) < bound_err);
        }
    }
    CHECK(std::abs(s_ri / std::sqrt(s_rr * s_ii)) < 0.01);
    CHECK(std::abs(s_ke / std::sqrt(s_rr * s_ee)) < 0.01);
}

TEST_CASE("identical seeds give bit-identical channels; other trials differ") {
    const ChannelSet a = draw_channel_set(16, 8, 0.1, SeedSpec{99, 5});
    const ChannelSet b = draw_channel_set(16, 8, 0.1, SeedSpec{99, 5});
    const ChannelSet c = draw_channel_set(16, 8, 0.1, SeedSpec{99, 6});
    CHECK((a.h_known.array() == b.h_known.array()).all());
    CHECK((a.h_true.array() == b.h_true.array()).all());
    CHECK((a.h_known.array() != c.h_known.array()).all());
}

TEST_CASE("known channel does not depend on the error variance") {
    const ChannelSet perfect = draw_channel_set(16, 8, 0.0, SeedSpec{3, 1});
    const ChannelSet noisy = draw_channel_set(16, 8, 0.3, SeedSpec{3, 1});
    CHECK((perfect.h_known.array() == noisy.h_known.array()).all());
    CHECK((noisy.h_true.array() != noisy.h_known.array()).any());

    const ChannelSet redrawn = with_channel_error(noisy.h_known, 0.3, SeedSpec{4, 0});
    CHECK((redrawn.h_known.array() == noisy.h_known.array()).all());
    CHECK((redrawn.h_true.array() != noisy.h_true.array()).all());
}

TEST_CASE("channel dump format") {
    CHECK(format_complex({1.5, -2.0}) == "1.5-2j");
    CHECK(format_complex({-0.25, 0.5}) == "-0.25+0.5j");
    CHECK(parse_complex("1e-3-4.5j") == Complex(1e-3, -4.5));
    CHECK_THROWS(parse_complex("1.0+2.0"));
    CHECK_THROWS(parse_complex("abc"));

    const ChannelSet ch = draw_channel_set(3, 2, 0.125, SeedSpec{1, 2});
    std::stringstream buf;
    write_channel_set(buf, ch);
    std::string header;
    std::getline(buf, header);
    CHECK(header == "3 2 0.125");
    buf.seekg(0);
    const ChannelSet back = read_channel_set(buf);
    CHECK(back.err_var == ch.err_var);
    CHECK((back.h_known.array() == ch.h_known.array()).all());
    CHECK((back.h_true.array() == ch.h_true.array()).all());

    std::stringstream truncated("2 1 0\n1+0j\n");
    CHECK_THROWS(read_channel_set(truncated));
}
