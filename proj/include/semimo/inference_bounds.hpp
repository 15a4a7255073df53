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
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "semimo/image.hpp"
#include "semimo/link_analysis.hpp"

namespace semimo {

/// Stand-ins for a generative reconstruction model G. All act on the unit
/// pixel scale.
class ContractionOperator {
public:
    struct Identity {};
    /// G(u) = anchor + factor (u - anchor); exactly factor-Lipschitz.
    struct SyntheticAffine {
        Image anchor;
        double factor = 1.0;
    };
    /// Closed-form MAP estimate argmin_x 0.5|x - u|^2 + strength 0.5 x^T L x
    /// with L the 4-neighbour grid Laplacian (reflecting borders), computed
    /// in the DCT-II basis that diagonalizes L. Symmetric, preserves
    /// constants, spectral norm 1.
    struct SmoothingDenoiser {
        double strength = 1.0;
    };
    /// Shell command with `{in}` and `{out}` PGM placeholders.
    struct ExternalCommand {
        std::string command_template;
    };
    using Kind = std::variant<Identity, SyntheticAffine, SmoothingDenoiser, ExternalCommand>;

    static ContractionOperator identity();
    static ContractionOperator affine(Image anchor, double factor);
    static ContractionOperator smoothing(double strength);
    static ContractionOperator external(std::string command_template,
                                        std::optional<double> declared_rho = std::nullopt);

    const Kind& kind() const noexcept { return kind_; }
    std::optional<double> declared_rho() const noexcept { return declared_rho_; }
    std::string describe() const;

private:
    ContractionOperator(Kind kind, std::optional<double> rho);

    Kind kind_;
    std::optional<double> declared_rho_;
};

/// Throws std::invalid_argument on an anchor shape mismatch and
/// ExternalCommandError when the external command fails or its output is not
/// a PGM of the input's size.
Image apply_operator(const ContractionOperator& op, const Image& noisy);

/// max |G(u) - G(v)| / |u - v| over `n_pairs` pairs u, v drawn around the
/// probe images with per-pixel Gaussian perturbations of std `perturbation_scale`.
/// This lower-bounds the Lipschitz constant. Requires n_pairs >= 100.
double estimate_rho(const ContractionOperator& op, std::span<const Image> probes,
                    double perturbation_scale, int n_pairs = 128, std::uint64_t seed = 1);

/// Mean of |G(s + e) - s| where e is a random direction scaled to norm
/// epsilon (unit pixel scale, image norm).
double estimate_bias(const ContractionOperator& op, std::span<const Image> clean, double epsilon,
                     int n_trials, std::uint64_t seed = 2);

struct InferenceProfile {
    double rho = 1.0;
    double epsilon = 0.0;
    double delta_eps = 0.0;
    double metric_lipschitz = 1.0;

    /// Throws std::invalid_argument unless every field is finite,
    /// 0 <= rho <= 1, epsilon >= 0, delta_eps >= 0 and metric_lipschitz > 0.
    void validate() const;
};

/// M(s,s) + rho l_M (E|s_hat - s| + eps) + l_M delta_eps.
double semantic_bound(const InferenceProfile& profile, double metric_floor, double expected_err);

/// M(s,s) + l_M E|s_hat - s|: the bound for plain identity reconstruction.
double identity_bound(double metric_floor, double metric_lipschitz, double expected_err);

/// (rho eps + delta_eps) / (1 - rho). Below this expected error, identity
/// reconstruction has the smaller bound. Throws std::domain_error if rho >= 1.
double inferiority_threshold(const InferenceProfile& profile);

/// -rho l_M 2^{k-1} alpha / (2 sqrt(2 pi) beta) exp(-beta^2 gamma / 2) gamma^{-1/2}
/// for stream k (1-based). This keeps beta in the denominator; differentiating
/// alpha Q(beta sqrt(gamma)) puts it in the numerator, so the two differ by a
/// factor beta^2 (1 for 4-QAM).
double sinr_sensitivity(const InferenceProfile& profile, const QamParams& qam, double gamma,
                        int stream);

}  // namespace semimo
