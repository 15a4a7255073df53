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

#include <complex>
#include <iosfwd>
#include <random>

#include <Eigen/Dense>

#include "semimo/random.hpp"

namespace semimo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// A multi-user downlink channel realization. Columns are users.
///
/// h_true = h_known + E, where h_known is what the transmitter designs its
/// precoder against and E is the CSI error with per-entry variance err_var.
/// h_known carries the 1/N_t normalization; the true channel power per entry
/// is therefore 1/N_t + err_var.
struct ChannelSet {
    int n_tx = 0;
    int n_users = 0;
    CMatrix h_true;
    CMatrix h_known;
    double err_var = 0.0;

    CMatrix error() const { return h_true - h_known; }
};

/// Fills a rows x cols matrix with i.i.d. CN(0, variance) entries.
CMatrix draw_complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance,
                              std::mt19937_64& engine);

/// Draws h_known ~ CN(0, I/N_t) per column and an independent error
/// E ~ CN(0, err_var I). Throws std::invalid_argument if n_tx < n_users,
/// n_users < 1 or err_var < 0.
ChannelSet draw_channel_set(int n_tx, int n_users, double err_var, SeedSpec seed);

/// Keeps h_known and draws a fresh error realization from `seed`.
ChannelSet with_channel_error(const CMatrix& h_known, double err_var, SeedSpec seed);

// Plain-text dump. Header line `N_t K err_var`, then N_t rows of h_known
// followed by N_t rows of h_true; each entry is one `re+imj` token.
void write_channel_set(std::ostream& out, const ChannelSet& channel);
ChannelSet read_channel_set(std::istream& in);

std::string format_complex(Complex z);
Complex parse_complex(const std::string& token);

}  // namespace semimo
