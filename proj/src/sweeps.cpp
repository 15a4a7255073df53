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

#include "semimo/sweeps.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "semimo/link_analysis.hpp"
#include "semimo/parallel.hpp"
#include "semimo/transceiver.hpp"

namespace semimo {

double db_to_linear(double db) { return std::isinf(db) && db < 0 ? 0.0 : std::pow(10.0, db / 10.0); }

GrayImage load_source_image(const ExperimentConfig& config) {
    if (config.image == "synthetic") return synthetic_test_image(config.image_size, config.image_size);
    return read_pgm(config.image);
}

ContractionOperator make_operator(const ExperimentConfig& config, const Image& clean) {
    if (config.reconstruction == "identity") return ContractionOperator::identity();
    if (config.reconstruction == "smoothing") return ContractionOperator::smoothing(config.smoothing_strength);
    if (config.reconstruction == "affine") {
        Image anchor = config.affine_anchor == "flat"
                           ? constant_image(clean.width, clean.height, 0.5)
                           : apply_operator(ContractionOperator::smoothing(config.affine_anchor_strength), clean);
        return ContractionOperator::affine(std::move(anchor), config.affine_factor);
    }
    return ContractionOperator::external(config.operator_command);
}

MetricOptions make_metric_options(const ExperimentConfig& config) {
    MetricOptions opts;
    if (config.wants_metric("external")) opts.external_command = config.metric_command;
    return opts;
}

namespace {

struct CellSpec {
    std::string case_name;
    Scheme scheme;
    double snr_db;
    double err_var_db;
};

struct Context {
    const ExperimentConfig& config;
    BitPlaneSource source;
    Image clean;
    ContractionOperator op;
    MetricOptions metric_options;
    QamConstellation constellation;
    QamParams qam;
    FrameOptions frame_options;
};

struct MetricSums {
    double mae = 0, neg_psnr = 0, one_minus_ssim = 0, external = 0;

    void add(const ExperimentConfig& cfg, const MetricOptions& opts, const Image& clean,
             const Image& recon) {
        if (cfg.wants_metric("mae")) mae += semimo::mae(clean, recon);
        if (cfg.wants_metric("psnr")) neg_psnr -= psnr(clean, recon, opts.psnr_cap);
        if (cfg.wants_metric("ssim")) one_minus_ssim += 1.0 - ssim(clean, recon, opts.ssim);
        if (cfg.wants_metric("external")) external += external_metric(*opts.external_command, clean, recon);
    }

    void store(const ExperimentConfig& cfg, double n, ResultRow& row) const {
        if (cfg.wants_metric("mae")) row.mae = mae / n;
        if (cfg.wants_metric("psnr")) row.neg_psnr = neg_psnr / n;
        if (cfg.wants_metric("ssim")) row.one_minus_ssim = one_minus_ssim / n;
        if (cfg.wants_metric("external")) row.external_metric = external / n;
    }
};

struct CellOutput {
    std::vector<ResultRow> rows;
    std::vector<InterferenceCheck> checks;
};

CellOutput run_cell(const Context& ctx, const CellSpec& cell, bool record_interference) {
    const ExperimentConfig& cfg = ctx.config;
    const double tx_power = cfg.noise_var * db_to_linear(cell.snr_db);
    const double err_var = db_to_linear(cell.err_var_db);
    const bool with_operator = cfg.reconstruction != "identity";

    double gamma_sum = 0, ber_sum = 0, i_precode_sum = 0, distortion_sum = 0;
    std::uint64_t errors = 0, bits = 0;
    MetricSums identity_metrics, operator_metrics;
    CellOutput out;

    for (int t = 0; t < cfg.n_channel_trials; ++t) {
        const SeedSpec trial_seed{cfg.master_seed, static_cast<std::uint64_t>(t)};
        const CMatrix known = draw_channel_set(cfg.n_tx, cfg.n_users, 0.0, trial_seed).h_known;
        const Precoder precoder = make_precoder(cell.scheme, known);

        ChannelSet analytic_view;
        analytic_view.n_tx = cfg.n_tx;
        analytic_view.n_users = cfg.n_users;
        analytic_view.h_known = known;
        analytic_view.h_true = known;
        analytic_view.err_var = err_var;
        const LinkBudget lb = link_budget(analytic_view, precoder, tx_power, cfg.noise_var);

        std::vector<double> bers;
        for (std::size_t k = 0; k < lb.n_users(); ++k) {
            bers.push_back(ber_from_sinr(lb.sinr[k], ctx.qam));
            gamma_sum += lb.sinr[k];
            ber_sum += bers.back();
            i_precode_sum += lb.i_precode[k];
        }
        distortion_sum += expected_distortion(bers, static_cast<std::size_t>(cfg.n_users));

        for (int f = 0; f < cfg.n_frames; ++f) {
            const SeedSpec frame_seed = child_seed(trial_seed, Stream::kFrame, static_cast<std::uint64_t>(f));
            const ChannelSet channel = with_channel_error(known, err_var, frame_seed);
            const FrameResult frame = transmit_frame(ctx.source, channel, precoder, tx_power,
                                                     cfg.noise_var, ctx.constellation, frame_seed,
                                                     ctx.frame_options);
            for (std::size_t k = 0; k < frame.bits.size(); ++k) {
                errors += frame.bit_errors[k];
                bits += frame.bits[k];
            }
            const Image noisy = to_unit(frame.image);
            identity_metrics.add(cfg, ctx.metric_options, ctx.clean, noisy);
            if (with_operator) {
                operator_metrics.add(cfg, ctx.metric_options, ctx.clean, apply_operator(ctx.op, noisy));
            }
        }

        if (record_interference) {
            const EmpiricalLinkBudget emp = empirical_link_budget(
                known, err_var, precoder, tx_power, cfg.noise_var, cfg.interference_draws,
                child_seed(trial_seed, Stream::kChannelError, 0));
            for (std::size_t k = 0; k < lb.n_users(); ++k) {
                out.checks.push_back(InterferenceCheck{cell.scheme, cell.err_var_db, t,
                                                       static_cast<int>(k),
                                                       lb.i_precode[k] + lb.i_error[k],
                                                       emp.mean_interference[k],
                                                       emp.se_interference[k]});
            }
        }
    }

    const double n_trials = cfg.n_channel_trials;
    const double n_user_trials = n_trials * cfg.n_users;
    ResultRow base;
    base.case_name = cell.case_name;
    base.scheme = cell.scheme;
    base.snr_db = cell.snr_db;
    base.err_var_db = cell.err_var_db;
    base.trial_count = cfg.n_channel_trials;
    base.gamma_analytic_mean = gamma_sum / n_user_trials;
    base.ber_analytic_mean = ber_sum / n_user_trials;
    base.ber_empirical = bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0;
    base.i_precode_mean = i_precode_sum / n_user_trials;
    base.i_error = tx_power * (cfg.n_users - 1) * err_var;
    base.exp_distortion = distortion_sum / n_trials;

    const double n_images = n_trials * cfg.n_frames;
    ResultRow identity_row = base;
    identity_row.recon = "identity";
    identity_metrics.store(cfg, n_images, identity_row);
    out.rows.push_back(identity_row);
    if (with_operator) {
        ResultRow operator_row = base;
        operator_row.recon = cfg.reconstruction;
        operator_metrics.store(cfg, n_images, operator_row);
        out.rows.push_back(operator_row);
    }
    return out;
}

ResultTable run_cells(const ExperimentConfig& config, const std::vector<CellSpec>& cells,
                      bool record_interference) {
    config.validate();
    const GrayImage gray = load_source_image(config);
    const Image clean = to_unit(gray);
    Context ctx{config,
                split_bit_planes(gray, config.n_users),
                clean,
                make_operator(config, clean),
                make_metric_options(config),
                QamConstellation(config.qam_order),
                qam_params(config.qam_order),
                FrameOptions{}};
    ctx.frame_options.equalizer = config.equalizer == "known" ? Equalizer::kKnownGain : Equalizer::kTrueGain;

    std::vector<std::optional<CellOutput>> outputs(cells.size());
    std::vector<std::string> failures(cells.size());
    parallel_for(cells.size(), config.workers, [&](std::size_t i) {
        try {
            outputs[i] = run_cell(ctx, cells[i], record_interference);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });

    ResultTable table;
    table.metadata = "reconstruction: " + ctx.op.describe() + "; " + metric_metadata(ctx.metric_options);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!outputs[i]) {
            table.error = "cell " + std::string(to_string(cells[i].scheme)) + " snr_db=" +
                          std::to_string(cells[i].snr_db) + " err_var_db=" +
                          std::to_string(cells[i].err_var_db) + ": " + failures[i];
            break;
        }
        for (auto& row : outputs[i]->rows) table.rows.push_back(std::move(row));
        for (auto& check : outputs[i]->checks) table.interference.push_back(check);
    }
    return table;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string csv_safe(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

}  // namespace

ResultTable run_snr_sweep(const ExperimentConfig& config) {
    std::vector<CellSpec> cells;
    for (double snr : config.snr_grid_db) {
        for (Scheme s : {Scheme::kMf, Scheme::kZf}) {
            cells.push_back({"snr", s, snr, -std::numeric_limits<double>::infinity()});
        }
    }
    return run_cells(config, cells, false);
}

ResultTable run_csi_error_sweep(const ExperimentConfig& config) {
    std::vector<CellSpec> cells;
    for (double err_db : config.err_var_grid_db) {
        for (Scheme s : {Scheme::kMf, Scheme::kZf}) cells.push_back({"csi", s, config.fixed_snr_db, err_db});
    }
    return run_cells(config, cells, true);
}

void write_csv(std::ostream& out, const ResultTable& table, const std::string& run_stamp) {
    if (!run_stamp.empty()) out << "# " << run_stamp << '\n';
    out << "# " << csv_safe(table.metadata) << '\n';
    out << kCsvHeader << '\n';
    for (const auto& r : table.rows) {
        out << r.case_name << ',' << to_string(r.scheme) << ',' << r.recon << ',' << fmt(r.snr_db)
            << ',' << fmt(r.err_var_db) << ',' << r.trial_count << ',' << fmt(r.gamma_analytic_mean)
            << ',' << fmt(r.ber_analytic_mean) << ',' << fmt(r.ber_empirical) << ','
            << fmt(r.i_precode_mean) << ',' << fmt(r.i_error) << ',' << fmt(r.exp_distortion) << ','
            << fmt(r.mae) << ',' << fmt(r.neg_psnr) << ',' << fmt(r.one_minus_ssim) << ','
            << fmt(r.external_metric) << '\n';
    }
    if (table.error) {
        // 16 columns: marker, message, 14 empty fields
        out << "error," << csv_safe(*table.error) << std::string(14, ',') << '\n';
    }
}

void write_interference_csv(std::ostream& out, const ResultTable& table) {
    out << "scheme,err_var_db,trial,user,i_analytic,i_empirical,i_empirical_se\n";
    for (const auto& c : table.interference) {
        out << to_string(c.scheme) << ',' << fmt(c.err_var_db) << ',' << c.trial << ',' << c.user
            << ',' << fmt(c.analytic) << ',' << fmt(c.empirical) << ',' << fmt(c.empirical_se) << '\n';
    }
}

}  // namespace semimo
