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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semimo/config.hpp"
#include "semimo/inference_bounds.hpp"
#include "semimo/metrics.hpp"
#include "semimo/precoding.hpp"

namespace semimo {

/// One CSV row: a grid point x scheme x reconstruction cell averaged over
/// channel trials (and frames for the image metrics).
struct ResultRow {
    std::string case_name;  // snr | csi
    Scheme scheme = Scheme::kMf;
    std::string recon;
    double snr_db = 0.0;
    double err_var_db = 0.0;  // -inf for perfect CSI
    int trial_count = 0;
    double gamma_analytic_mean = 0.0;
    double ber_analytic_mean = 0.0;
    double ber_empirical = 0.0;
    double i_precode_mean = 0.0;
    double i_error = 0.0;
    double exp_distortion = 0.0;
    std::optional<double> mae;
    std::optional<double> neg_psnr;
    std::optional<double> one_minus_ssim;
    std::optional<double> external_metric;
};

/// Analytic vs Monte-Carlo interference for one user of one channel trial.
struct InterferenceCheck {
    Scheme scheme = Scheme::kMf;
    double err_var_db = 0.0;
    int trial = 0;
    int user = 0;
    double analytic = 0.0;
    double empirical = 0.0;
    double empirical_se = 0.0;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<InterferenceCheck> interference;
    /// Set when a cell failed; rows hold every cell that completed before it
    /// in grid order.
    std::optional<std::string> error;
    std::string metadata;
};

double db_to_linear(double db);

/// Perfect-CSI sweep over config.snr_grid_db.
ResultTable run_snr_sweep(const ExperimentConfig& config);

/// Sweep over config.err_var_grid_db at config.fixed_snr_db; also fills
/// `interference` with config.interference_draws error draws per trial.
ResultTable run_csi_error_sweep(const ExperimentConfig& config);

inline constexpr const char* kCsvHeader =
    "case,scheme,recon,snr_db,err_var_db,trial_count,gamma_analytic_mean,ber_analytic_mean,"
    "ber_empirical,i_precode_mean,i_error,exp_distortion,mae,neg_psnr,one_minus_ssim,"
    "external_metric";

/// Comment lines (`# ...`), the header, then rows. The run stamp, when
/// given, is the only line that varies between identical runs.
void write_csv(std::ostream& out, const ResultTable& table, const std::string& run_stamp = "");

void write_interference_csv(std::ostream& out, const ResultTable& table);

/// The source image named by config.image.
GrayImage load_source_image(const ExperimentConfig& config);

/// Reconstruction operator named by config.reconstruction for `clean`.
ContractionOperator make_operator(const ExperimentConfig& config, const Image& clean);

MetricOptions make_metric_options(const ExperimentConfig& config);

}  // namespace semimo
