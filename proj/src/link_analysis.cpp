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

#include "semimo/link_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace semimo {

namespace {

void check_link_inputs(const CMatrix& h_known, const Precoder& precoder, double tx_power,
                       double noise_var) {
    if (h_known.rows() != precoder.matrix_f.rows() || h_known.cols() != precoder.matrix_f.cols()) {
        throw std::invalid_argument("link budget: channel is " + std::to_string(h_known.rows()) +
                                    "x" + std::to_string(h_known.cols()) + " but precoder is " +
                                    std::to_string(precoder.matrix_f.rows()) + "x" +
                                    std::to_string(precoder.matrix_f.cols()));
    }
    if (!(tx_power > 0.0)) throw std::invalid_argument("link budget: tx_power must be > 0");
    if (!(noise_var > 0.0)) throw std::invalid_argument("link budget: noise_var must be > 0");
}

}  // namespace

LinkBudget link_budget(const ChannelSet& channel, const Precoder& precoder, double tx_power,
                       double noise_var) {
    check_link_inputs(channel.h_known, precoder, tx_power, noise_var);
    const Eigen::Index n_users = channel.h_known.cols();
    // gains(k, j) = h_k^H f_j
    const CMatrix gains = channel.h_known.adjoint() * precoder.matrix_f;

    LinkBudget lb;
    lb.tx_power = tx_power;
    lb.noise_var = noise_var;
    lb.err_var = channel.err_var;
    const double i_error = tx_power * static_cast<double>(n_users - 1) * channel.err_var;
    for (Eigen::Index k = 0; k < n_users; ++k) {
        const double desired = tx_power * std::norm(gains(k, k));
        const double interference =
            tx_power * (gains.row(k).squaredNorm() - std::norm(gains(k, k)));
        lb.p_precode.push_back(desired);
        lb.i_precode.push_back(std::max(interference, 0.0));
        lb.i_error.push_back(i_error);
        lb.sinr.push_back((desired + tx_power * channel.err_var) /
                          (lb.i_precode.back() + i_error + noise_var));
    }
    return lb;
}

EmpiricalLinkBudget empirical_link_budget(const CMatrix& h_known, double err_var,
                                          const Precoder& precoder, double tx_power,
                                          double noise_var, long n_trials, SeedSpec seed) {
    check_link_inputs(h_known, precoder, tx_power, noise_var);
    if (n_trials < 1) throw std::invalid_argument("empirical_link_budget: n_trials must be >= 1");
    const Eigen::Index n_users = h_known.cols();
    const auto k_users = static_cast<std::size_t>(n_users);

    // Welford running moments per user.
    struct Moments {
        double mean = 0.0;
        double m2 = 0.0;
        void add(double x, double n) {
            const double d = x - mean;
            mean += d / n;
            m2 += d * (x - mean);
        }
        double std_error(double n) const { return n < 2 ? 0.0 : std::sqrt(m2 / (n - 1.0) / n); }
    };
    std::vector<Moments> desired(k_users), interference(k_users);

    CMatrix gains(n_users, n_users);
    for (long t = 0; t < n_trials; ++t) {
        const ChannelSet ch = with_channel_error(
            h_known, err_var,
            SeedSpec{seed.master_seed, seed.trial_index + static_cast<std::uint64_t>(t)});
        gains.noalias() = ch.h_true.adjoint() * precoder.matrix_f;
        const double count = static_cast<double>(t + 1);
        for (Eigen::Index k = 0; k < n_users; ++k) {
            const auto u = static_cast<std::size_t>(k);
            const double self = std::norm(gains(k, k));
            desired[u].add(tx_power * self, count);
            interference[u].add(tx_power * (gains.row(k).squaredNorm() - self), count);
        }
    }

    EmpiricalLinkBudget out;
    out.n_trials = n_trials;
    const double n = static_cast<double>(n_trials);
    for (std::size_t k = 0; k < k_users; ++k) {
        out.mean_desired.push_back(desired[k].mean);
        out.mean_interference.push_back(interference[k].mean);
        out.se_desired.push_back(desired[k].std_error(n));
        out.se_interference.push_back(interference[k].std_error(n));
        out.sinr.push_back(out.mean_desired[k] / (out.mean_interference[k] + noise_var));
    }
    return out;
}

QamParams qam_params(int order) {
    if (order < 4 || (order & (order - 1)) != 0) {
        throw std::invalid_argument("QAM order must be a power of two >= 4");
    }
    const int bits = static_cast<int>(std::lround(std::log2(order)));
    if (bits % 2 != 0) throw std::invalid_argument("QAM order must be a square constellation");
    QamParams q;
    q.order = order;
    q.alpha = 4.0 / bits * (1.0 - 1.0 / std::sqrt(static_cast<double>(order)));
    q.beta = std::sqrt(3.0 / (order - 1.0));
    return q;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double ber_from_sinr(double sinr, const QamParams& qam) {
    if (!(sinr >= 0.0)) throw std::invalid_argument("ber_from_sinr: sinr must be >= 0");
    const double ber = qam.alpha * q_function(qam.beta * std::sqrt(sinr));
    return std::clamp(ber, 0.0, 1.0);
}

double expected_distortion(std::span<const double> bers,
                           std::optional<std::size_t> expected_streams) {
    if (expected_streams && bers.size() != *expected_streams) {
        throw std::invalid_argument("expected_distortion: got " + std::to_string(bers.size()) +
                                    " BERs for " + std::to_string(*expected_streams) + " streams");
    }
    double total = 0.0;
    double weight = 1.0;
    for (const double b : bers) {
        if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("expected_distortion: BER outside [0,1]");
        total += weight * b;
        weight *= 2.0;
    }
    return total;
}

double expected_error_norm(std::span<const double> bers, std::size_t n_pixels) {
    double squared = 0.0;
    double weight = 1.0;
    for (const double b : bers) {
        squared += weight * b;
        weight *= 4.0;
    }
    return std::sqrt(static_cast<double>(n_pixels) * squared) / 255.0;
}

}  // namespace semimo
