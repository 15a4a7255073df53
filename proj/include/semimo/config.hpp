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
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace semimo {

/// Bad configuration (unknown key, unparsable or out-of-range value).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Experiment settings. Text form is one `key = value` per line with `#`
/// comments; keys match the field names. Grids are comma lists whose items
/// are values or `start:step:stop` ranges (`-inf, -20:2:0`); `-inf` is
/// allowed in the error-variance grid for perfect CSI.
struct ExperimentConfig {
    int n_tx = 16;
    int n_users = 8;
    int qam_order = 4;
    double noise_var = 1.0;

    std::vector<double> snr_grid_db;      // default -5:2.5:20
    std::vector<double> err_var_grid_db;  // default -20:2:0
    double fixed_snr_db = 15.0;

    int n_channel_trials = 10;
    int n_frames = 1;

    /// identity | smoothing | affine | external
    std::string reconstruction = "smoothing";
    double smoothing_strength = 2.0;
    double affine_factor = 0.5;
    /// smoothed (anchor = smoothing of the clean image) | flat (mid-gray)
    std::string affine_anchor = "smoothed";
    double affine_anchor_strength = 2.0;
    std::string operator_command;

    /// Subset of mae, psnr, ssim, external.
    std::vector<std::string> metrics{"mae", "psnr", "ssim"};
    std::string metric_command;

    /// true | known: which effective gain the receiver divides by.
    std::string equalizer = "true";

    /// `synthetic` or a path to a binary PGM.
    std::string image = "synthetic";
    int image_size = 64;

    long interference_draws = 10000;

    std::vector<double> bench_users{32, 64, 128, 256, 512};
    double bench_antenna_ratio = 2.0;
    int bench_repetitions = 100;

    std::uint64_t master_seed = 1;
    int workers = 1;
    std::string output = "results.csv";

    ExperimentConfig();

    bool wants_metric(const std::string& name) const;
    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
};

std::vector<double> parse_grid(const std::string& text);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace semimo
