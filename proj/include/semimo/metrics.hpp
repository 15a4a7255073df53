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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "semimo/image.hpp"

namespace semimo {

/// PSNR reported for identical images, keeping CSV output finite.
inline constexpr double kPsnrCap = 999.0;

/// Mean SSIM over all (stride 1) square windows with uniform weights and
/// population statistics. Constants are C1 = (k1 L)^2, C2 = (k2 L)^2 with
/// L the dynamic range (1 on the unit pixel scale, i.e. 255 for 8-bit data).
struct SsimConfig {
    int window = 8;
    double k1 = 0.01;
    double k2 = 0.03;
};

/// 10 log10(1 / MSE) on the unit scale, equal to 10 log10(255^2 / MSE) on
/// 8-bit data. Returns `cap` when MSE is zero.
double psnr(const Image& ref, const Image& test, double cap = kPsnrCap);

double ssim(const Image& ref, const Image& test, const SsimConfig& config = {});

/// Mean absolute pixel difference on the unit scale. Lipschitz in the test
/// image with constant 1/sqrt(N) under the image norm.
double mae(const Image& ref, const Image& test);

/// Lower-is-better view of the metrics.
struct MetricReport {
    double neg_psnr = 0.0;
    double one_minus_ssim = 0.0;
    double mae = 0.0;
    std::optional<std::pair<std::string, double>> external;
};

struct MetricOptions {
    SsimConfig ssim;
    double psnr_cap = kPsnrCap;
    /// Command template with `{ref}` and `{test}` placeholders; it must print
    /// one real number on standard output.
    std::optional<std::string> external_command;
    std::string external_name = "external";
};

MetricReport evaluate_metrics(const Image& ref, const Image& test, const MetricOptions& options = {});

/// Writes both images as PGM, runs the command, parses the printed value.
double external_metric(const std::string& command_template, const Image& ref, const Image& test);

/// One-line description of the pinned metric constants for output headers.
std::string metric_metadata(const MetricOptions& options);

using MetricFn = std::function<double(const Image& test, const Image& ref)>;

/// max |M(u,s) - M(v,s)| / |u - v| over the given (u, v) pairs; pairs with
/// u == v are skipped.
double metric_lipschitz_probe(const MetricFn& metric, const Image& reference,
                              std::span<const std::pair<Image, Image>> samples);

/// Same probe on `n_samples` random pairs around `reference` with Gaussian
/// perturbations of per-pixel standard deviation `scale`.
double metric_lipschitz_probe(const MetricFn& metric, const Image& reference, int n_samples,
                              double scale, std::uint64_t seed);

}  // namespace semimo
