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

// semimo: command-line front end for the semantic MIMO link lab.
//
//   semimo snr-sweep   --config cfg --out results.csv [--seed N] [--workers N]
//   semimo csi-sweep   --config cfg --out results.csv
//   semimo bench       --config cfg --out bench.csv
//   semimo reconstruct --config cfg --out recon.pgm [--image in.pgm] [--scheme mf|zf]
//                      [--snr dB] [--err-var dB] [--noisy-out noisy.pgm]
//
// Exit status: 0 success, 2 configuration error, 3 runtime error.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "semimo/bench.hpp"
#include "semimo/config.hpp"
#include "semimo/external.hpp"
#include "semimo/link_analysis.hpp"
#include "semimo/sweeps.hpp"
#include "semimo/transceiver.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

struct ReconstructOptions {
    std::string image;
    std::string scheme = "mf";
    std::optional<double> snr_db;
    std::optional<double> err_var_db;
    std::string noisy_out;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "key = value configuration file");
    cmd->add_option("--out", opts.out, "output path (overrides config `output`)");
    cmd->add_option("--seed", opts.seed, "master seed (overrides config)");
    cmd->add_option("--workers", opts.workers, "parallel grid cells")->check(CLI::PositiveNumber);
}

semimo::ExperimentConfig resolve_config(const CommonOptions& opts) {
    semimo::ExperimentConfig cfg =
        opts.config_path.empty() ? semimo::ExperimentConfig{} : semimo::load_config(opts.config_path);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.workers) cfg.workers = *opts.workers;
    if (!opts.out.empty()) cfg.output = opts.out;
    cfg.validate();
    semimo::set_external_concurrency(cfg.workers);
    return cfg;
}

std::string run_stamp(const std::string& verb, const semimo::ExperimentConfig& cfg) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char when[32];
    std::strftime(when, sizeof when, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return "semimo " + verb + " master_seed=" + std::to_string(cfg.master_seed) + " generated " + when;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

int run_sweep(const std::string& verb, const CommonOptions& opts) {
    const semimo::ExperimentConfig cfg = resolve_config(opts);
    const semimo::ResultTable table =
        verb == "snr-sweep" ? semimo::run_snr_sweep(cfg) : semimo::run_csi_error_sweep(cfg);
    auto out = open_output(cfg.output);
    semimo::write_csv(out, table, run_stamp(verb, cfg));
    if (verb == "csi-sweep") {
        auto side = open_output(cfg.output + ".interference.csv");
        semimo::write_interference_csv(side, table);
    }
    std::cout << "wrote " << table.rows.size() << " rows to " << cfg.output << '\n';
    if (table.error) {
        std::cerr << "error: " << *table.error << '\n';
        return kExitRuntime;
    }
    return 0;
}

int run_bench(const CommonOptions& opts) {
    const semimo::ExperimentConfig cfg = resolve_config(opts);
    const semimo::BenchResult result = semimo::run_complexity_bench(cfg);
    auto out = open_output(cfg.output);
    semimo::write_bench_csv(out, result);
    semimo::write_bench_csv(std::cout, result);
    return 0;
}

void print_report(const std::string& label, const semimo::MetricReport& r) {
    std::cout << label << ": mae=" << r.mae << " neg_psnr=" << r.neg_psnr
              << " one_minus_ssim=" << r.one_minus_ssim;
    if (r.external) std::cout << ' ' << r.external->first << '=' << r.external->second;
    std::cout << '\n';
}

int run_reconstruct(const CommonOptions& opts, const ReconstructOptions& ropts) {
    semimo::ExperimentConfig cfg = resolve_config(opts);
    if (!ropts.image.empty()) cfg.image = ropts.image;
    const semimo::Scheme scheme = semimo::parse_scheme(ropts.scheme);
    const double snr_db = ropts.snr_db.value_or(cfg.fixed_snr_db);
    const double err_var = semimo::db_to_linear(ropts.err_var_db.value_or(-INFINITY));
    const double tx_power = cfg.noise_var * semimo::db_to_linear(snr_db);

    const semimo::GrayImage gray = semimo::load_source_image(cfg);
    const semimo::Image clean = semimo::to_unit(gray);
    const semimo::SeedSpec seed{cfg.master_seed, 0};
    const semimo::ChannelSet channel =
        semimo::draw_channel_set(cfg.n_tx, cfg.n_users, err_var, seed);
    const semimo::Precoder precoder = semimo::make_precoder(scheme, channel.h_known);
    semimo::FrameOptions frame_opts;
    if (cfg.equalizer == "known") frame_opts.equalizer = semimo::Equalizer::kKnownGain;
    const semimo::FrameResult frame = semimo::transmit_frame(
        semimo::split_bit_planes(gray, cfg.n_users), channel, precoder, tx_power, cfg.noise_var,
        semimo::QamConstellation(cfg.qam_order), seed, frame_opts);

    const semimo::Image noisy = semimo::to_unit(frame.image);
    const semimo::Image recon = semimo::apply_operator(semimo::make_operator(cfg, clean), noisy);
    if (!ropts.noisy_out.empty()) semimo::write_pgm(ropts.noisy_out, frame.image);
    semimo::write_pgm(cfg.output, semimo::to_gray(recon));

    const semimo::MetricOptions mopts = semimo::make_metric_options(cfg);
    std::cout << "scheme=" << semimo::to_string(scheme) << " snr_db=" << snr_db
              << " ber=" << frame.overall_ber() << '\n';
    print_report("identity", semimo::evaluate_metrics(clean, noisy, mopts));
    print_report(cfg.reconstruction, semimo::evaluate_metrics(clean, recon, mopts));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-user semantic MIMO link-level lab"};
    app.require_subcommand(1);

    CommonOptions common;
    ReconstructOptions ropts;
    auto* snr = app.add_subcommand("snr-sweep", "perfect-CSI sweep over transmit SNR");
    auto* csi = app.add_subcommand("csi-sweep", "CSI error variance sweep at fixed SNR");
    auto* bench = app.add_subcommand("bench", "precoder construction time scaling");
    auto* recon = app.add_subcommand("reconstruct", "one image end to end");
    for (auto* cmd : {snr, csi, bench, recon}) add_common(cmd, common);
    recon->add_option("--image", ropts.image, "binary PGM source (default: config image)");
    recon->add_option("--scheme", ropts.scheme, "mf or zf")->check(CLI::IsMember({"mf", "zf"}));
    recon->add_option("--snr", ropts.snr_db, "transmit SNR in dB (default fixed_snr_db)");
    recon->add_option("--err-var", ropts.err_var_db, "CSI error variance in dB (default perfect CSI)");
    recon->add_option("--noisy-out", ropts.noisy_out, "also write the received image");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*snr) return run_sweep("snr-sweep", common);
        if (*csi) return run_sweep("csi-sweep", common);
        if (*bench) return run_bench(common);
        return run_reconstruct(common, ropts);
    } catch (const semimo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
