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

#include "semimo/inference_bounds.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "semimo/external.hpp"
#include "semimo/random.hpp"

namespace semimo {

ContractionOperator::ContractionOperator(Kind kind, std::optional<double> rho)
    : kind_(std::move(kind)), declared_rho_(rho) {}

ContractionOperator ContractionOperator::identity() { return {Identity{}, 1.0}; }

ContractionOperator ContractionOperator::affine(Image anchor, double factor) {
    if (!(factor >= 0.0 && factor <= 1.0)) {
        throw std::invalid_argument("affine operator: factor must lie in [0,1]");
    }
    return {SyntheticAffine{std::move(anchor), factor}, factor};
}

ContractionOperator ContractionOperator::smoothing(double strength) {
    if (!(strength >= 0.0) || !std::isfinite(strength)) {
        throw std::invalid_argument("smoothing operator: strength must be finite and >= 0");
    }
    return {SmoothingDenoiser{strength}, 1.0};
}

ContractionOperator ContractionOperator::external(std::string command_template,
                                                  std::optional<double> declared_rho) {
    if (command_template.empty()) throw std::invalid_argument("external operator: empty command");
    return {ExternalCommand{std::move(command_template)}, declared_rho};
}

std::string ContractionOperator::describe() const {
    std::ostringstream out;
    std::visit(
        [&out](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Identity>) {
                out << "identity";
            } else if constexpr (std::is_same_v<T, SyntheticAffine>) {
                out << "affine(factor=" << k.factor << ")";
            } else if constexpr (std::is_same_v<T, SmoothingDenoiser>) {
                out << "smoothing(strength=" << k.strength << ")";
            } else {
                out << "external(" << k.command_template << ")";
            }
        },
        kind_);
    return out.str();
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Orthonormal DCT-II: rows are the eigenvectors of the reflecting-border
// path-graph Laplacian, with eigenvalue 2 - 2 cos(pi i / n).
Eigen::MatrixXd dct_matrix(int n) {
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i) {
        const double s = i == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int j = 0; j < n; ++j) c(i, j) = s * std::cos(std::numbers::pi * (j + 0.5) * i / n);
    }
    return c;
}

Image smooth(const Image& u, double strength) {
    if (strength == 0.0) return u;
    const int h = u.height, w = u.width;
    const Eigen::MatrixXd ch = dct_matrix(h);
    const Eigen::MatrixXd cw = dct_matrix(w);
    const Eigen::Map<const RowMatrix> in(u.pixels.data(), h, w);
    Eigen::MatrixXd coeff = ch * in * cw.transpose();
    for (int i = 0; i < h; ++i) {
        const double li = 2.0 - 2.0 * std::cos(std::numbers::pi * i / h);
        for (int j = 0; j < w; ++j) {
            const double lj = 2.0 - 2.0 * std::cos(std::numbers::pi * j / w);
            coeff(i, j) /= 1.0 + strength * (li + lj);
        }
    }
    Image out{w, h, std::vector<double>(u.size())};
    Eigen::Map<RowMatrix> dst(out.pixels.data(), h, w);
    dst = ch.transpose() * coeff * cw;
    return out;
}

Image run_external(const std::string& command_template, const Image& noisy) {
    const auto in_path = scratch_path("in", ".pgm");
    const auto out_path = scratch_path("out", ".pgm");
    write_pgm(in_path, to_gray(noisy));
    auto cleanup = [&] {
        std::error_code ec;
        std::filesystem::remove(in_path, ec);
        std::filesystem::remove(out_path, ec);
    };
    const std::string cmd = substitute_placeholders(
        command_template, {{"in", in_path.string()}, {"out", out_path.string()}});
    const int status = run_command(cmd);
    if (status != 0) {
        cleanup();
        throw ExternalCommandError("external operator exited with status " +
                                   std::to_string(status) + ": " + cmd);
    }
    GrayImage result;
    try {
        result = read_pgm(out_path);
    } catch (const std::exception& e) {
        cleanup();
        throw ExternalCommandError(std::string("external operator produced no usable image: ") + e.what());
    }
    cleanup();
    if (result.width != noisy.width || result.height != noisy.height) {
        throw ExternalCommandError("external operator changed the image size");
    }
    return to_unit(result);
}

void add_gaussian(Image& img, double scale, std::mt19937_64& engine) {
    std::normal_distribution<double> gauss(0.0, scale);
    for (auto& p : img.pixels) p += gauss(engine);
}

}  // namespace

Image apply_operator(const ContractionOperator& op, const Image& noisy) {
    return std::visit(
        [&noisy](const auto& k) -> Image {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ContractionOperator::Identity>) {
                return noisy;
            } else if constexpr (std::is_same_v<T, ContractionOperator::SyntheticAffine>) {
                if (k.anchor.width != noisy.width || k.anchor.height != noisy.height) {
                    throw std::invalid_argument("affine operator: anchor size differs from input");
                }
                Image out = noisy;
                for (std::size_t i = 0; i < out.size(); ++i) {
                    out.pixels[i] = k.anchor.pixels[i] + k.factor * (noisy.pixels[i] - k.anchor.pixels[i]);
                }
                return out;
            } else if constexpr (std::is_same_v<T, ContractionOperator::SmoothingDenoiser>) {
                return smooth(noisy, k.strength);
            } else {
                return run_external(k.command_template, noisy);
            }
        },
        op.kind());
}

double estimate_rho(const ContractionOperator& op, std::span<const Image> probes,
                    double perturbation_scale, int n_pairs, std::uint64_t seed) {
    if (n_pairs < 100) throw std::invalid_argument("estimate_rho: need at least 100 probe pairs");
    if (probes.empty()) throw std::invalid_argument("estimate_rho: no probe images");
    if (!(perturbation_scale > 0.0)) throw std::invalid_argument("estimate_rho: scale must be > 0");
    double best = 0.0;
    for (int i = 0; i < n_pairs; ++i) {
        auto engine = make_engine(SeedSpec{seed, static_cast<std::uint64_t>(i)}, Stream::kProbe);
        const Image& base = probes[static_cast<std::size_t>(i) % probes.size()];
        Image u = base, v = base;
        add_gaussian(u, perturbation_scale, engine);
        add_gaussian(v, perturbation_scale, engine);
        const double dist = image_distance(u, v);
        if (dist == 0.0) continue;
        best = std::max(best, image_distance(apply_operator(op, u), apply_operator(op, v)) / dist);
    }
    return best;
}

double estimate_bias(const ContractionOperator& op, std::span<const Image> clean, double epsilon,
                     int n_trials, std::uint64_t seed) {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("estimate_bias: epsilon must be >= 0");
    if (clean.empty() || n_trials < 1) throw std::invalid_argument("estimate_bias: nothing to average");
    double total = 0.0;
    for (int t = 0; t < n_trials; ++t) {
        const Image& s = clean[static_cast<std::size_t>(t) % clean.size()];
        Image perturbed = s;
        if (epsilon > 0.0) {
            auto engine = make_engine(SeedSpec{seed, static_cast<std::uint64_t>(t)}, Stream::kProbe);
            Image direction = constant_image(s.width, s.height, 0.0);
            add_gaussian(direction, 1.0, engine);
            const double norm = image_distance(direction, constant_image(s.width, s.height, 0.0));
            for (std::size_t i = 0; i < s.size(); ++i) {
                perturbed.pixels[i] += epsilon * direction.pixels[i] / norm;
            }
        }
        total += image_distance(apply_operator(op, perturbed), s);
    }
    return total / n_trials;
}

void InferenceProfile::validate() const {
    const bool finite = std::isfinite(rho) && std::isfinite(epsilon) && std::isfinite(delta_eps) &&
                        std::isfinite(metric_lipschitz);
    if (!finite || rho < 0.0 || rho > 1.0 || epsilon < 0.0 || delta_eps < 0.0 ||
        !(metric_lipschitz > 0.0)) {
        throw std::invalid_argument("inference profile: need 0<=rho<=1, eps>=0, delta>=0, l_M>0");
    }
}

double semantic_bound(const InferenceProfile& profile, double metric_floor, double expected_err) {
    profile.validate();
    if (!(metric_floor >= 0.0) || !(expected_err >= 0.0)) {
        throw std::invalid_argument("semantic_bound: inputs must be >= 0");
    }
    return metric_floor + profile.rho * profile.metric_lipschitz * (expected_err + profile.epsilon) +
           profile.metric_lipschitz * profile.delta_eps;
}

double identity_bound(double metric_floor, double metric_lipschitz, double expected_err) {
    if (!(metric_floor >= 0.0) || !(metric_lipschitz > 0.0) || !(expected_err >= 0.0)) {
        throw std::invalid_argument("identity_bound: inputs must be >= 0 (l_M > 0)");
    }
    return metric_floor + metric_lipschitz * expected_err;
}

double inferiority_threshold(const InferenceProfile& profile) {
    profile.validate();
    if (profile.rho >= 1.0) {
        throw std::domain_error("inferiority_threshold: undefined for rho >= 1 (not a contraction)");
    }
    return (profile.rho * profile.epsilon + profile.delta_eps) / (1.0 - profile.rho);
}

double sinr_sensitivity(const InferenceProfile& profile, const QamParams& qam, double gamma,
                        int stream) {
    profile.validate();
    if (!(gamma > 0.0)) throw std::invalid_argument("sinr_sensitivity: gamma must be > 0");
    if (stream < 1) throw std::invalid_argument("sinr_sensitivity: streams are 1-based");
    const double weight = std::ldexp(1.0, stream - 1);
    const double front = weight * qam.alpha / (2.0 * std::sqrt(2.0 * std::numbers::pi) * qam.beta);
    return -profile.rho * profile.metric_lipschitz * front *
           std::exp(-qam.beta * qam.beta * gamma / 2.0) / std::sqrt(gamma);
}

}  // namespace semimo
