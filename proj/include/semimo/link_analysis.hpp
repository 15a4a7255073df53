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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "semimo/channel.hpp"
#include "semimo/precoding.hpp"

namespace semimo {

/// Per-user power and interference decomposition averaged over the CSI error.
///
///   p_precode[k] = p |h_k^H f_k|^2          (known channel)
///   i_precode[k] = p sum_{j != k} |h_k^H f_j|^2
///   i_error[k]   = p (K - 1) err_var
///   sinr[k]      = (p_precode[k] + p err_var) / (i_precode[k] + i_error[k] + noise_var)
struct LinkBudget {
    std::vector<double> p_precode;
    std::vector<double> i_precode;
    std::vector<double> i_error;
    std::vector<double> sinr;
    double tx_power = 0.0;
    double noise_var = 0.0;
    double err_var = 0.0;

    std::size_t n_users() const noexcept { return sinr.size(); }
};

LinkBudget link_budget(const ChannelSet& channel, const Precoder& precoder, double tx_power,
                       double noise_var);

/// Monte-Carlo estimate of E[P_k] and E[I_k] over fresh error draws with the
/// known channel fixed. Standard errors are of the means.
struct EmpiricalLinkBudget {
    std::vector<double> mean_desired;
    std::vector<double> mean_interference;
    std::vector<double> se_desired;
    std::vector<double> se_interference;
    std::vector<double> sinr;
    long n_trials = 0;
};

EmpiricalLinkBudget empirical_link_budget(const CMatrix& h_known, double err_var,
                                          const Precoder& precoder, double tx_power,
                                          double noise_var, long n_trials, SeedSpec seed);

/// Square M-QAM constants for BER ~= alpha Q(beta sqrt(gamma)).
struct QamParams {
    int order = 4;
    double alpha = 1.0;
    double beta = 1.0;
};

/// Throws std::invalid_argument unless `order` is an even power of two >= 4.
QamParams qam_params(int order);

/// Gaussian tail probability, 0.5 erfc(x / sqrt 2).
double q_function(double x);

double ber_from_sinr(double sinr, const QamParams& qam);

/// sum_k 2^{k-1} BER_k with stream 1 the least significant bit plane.
/// If `expected_streams` is given the length must match it.
double expected_distortion(std::span<const double> bers,
                           std::optional<std::size_t> expected_streams = std::nullopt);

/// Image-norm counterpart of expected_distortion, on the [0,1] pixel scale:
/// sqrt(N sum_k 4^{k-1} BER_k) / 255. Same one-error-per-pixel assumption;
/// the square root is taken of the expected squared norm.
double expected_error_norm(std::span<const double> bers, std::size_t n_pixels);

}  // namespace semimo
