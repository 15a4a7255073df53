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

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "doctest.h"
#include "semimo/bench.hpp"
#include "semimo/parallel.hpp"
#include "semimo/sweeps.hpp"

using namespace semimo;

namespace {

ExperimentConfig small_config() {
    std::istringstream in(R"(
        image_size = 16
        n_channel_trials = 2
        snr_grid_db = 0, 20
        err_var_grid_db = -inf, -10
        fixed_snr_db = 20
        interference_draws = 2000
        master_seed = 42
    )");
    return parse_config(in);
}

std::string csv_of(const ResultTable& t) {
    std::ostringstream out;
    write_csv(out, t);
    return out.str();
}

const ResultRow& find_row(const ResultTable& t, Scheme s, const std::string& recon, double snr) {
    for (const auto& r : t.rows)
        if (r.scheme == s && r.recon == recon && r.snr_db == snr) return r;
    throw std::runtime_error("row not found");
}

}  // namespace

TEST_CASE("config defaults and parsing") {
    const ExperimentConfig def;
    CHECK(def.n_tx == 16);
    CHECK(def.n_users == 8);
    CHECK(def.snr_grid_db.size() == 11);
    CHECK(def.snr_grid_db.front() == -5.0);
    CHECK(def.snr_grid_db.back() == 20.0);
    CHECK(def.err_var_grid_db.size() == 11);
    CHECK_NOTHROW(def.validate());

    std::istringstream in("# comment\nqam_order = 16   # trailing\n\nmetrics = mae, ssim\nmaster_seed = 0x10\n");
    const ExperimentConfig cfg = parse_config(in);
    CHECK(cfg.qam_order == 16);
    CHECK(cfg.master_seed == 16);
    CHECK(cfg.wants_metric("ssim"));
    CHECK_FALSE(cfg.wants_metric("psnr"));
}

TEST_CASE("config errors") {
    const char* bad[] = {
        "bogus_key = 1",        "n_tx 16",
        "n_tx = sixteen",       "n_users = 4",
        "n_tx = 4",             "qam_order = 8",
        "qam_order = 32",       "noise_var = 0",
        "snr_grid_db = 5:1:0",  "snr_grid_db = 0:0:5",
        "snr_grid_db = -inf",   "err_var_grid_db = inf",
        "reconstruction = gan", "reconstruction = external",
        "metrics = mae, lpips", "metrics = external",
        "affine_factor = 1.5",  "equalizer = mmse",
        "image_size = 4",       "workers = 0",
        "master_seed = -1",     "bench_users = 3.5",
    };
    for (const char* text : bad) {
        INFO(text);
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_config(in), ConfigError);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/semimo.cfg"), ConfigError);
}

TEST_CASE("grid parsing") {
    CHECK(parse_grid("0:5:20") == std::vector<double>{0, 5, 10, 15, 20});
    CHECK(parse_grid("0:0.1:0.3").size() == 4);
    CHECK(parse_grid(" 1, 2.5 ,-3") == std::vector<double>{1, 2.5, -3});
    CHECK(parse_grid("-inf, 0:5:10, 20").size() == 5);
    const auto g = parse_grid("-inf, -10");
    CHECK(std::isinf(g[0]));
    CHECK(g[0] < 0);
    CHECK_THROWS_AS(parse_grid("1:2"), ConfigError);
    CHECK_THROWS_AS(parse_grid("a, b"), ConfigError);
    CHECK(db_to_linear(-std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
}

TEST_CASE("snr sweep shape and physics") {
    const ExperimentConfig cfg = small_config();
    const ResultTable t = run_snr_sweep(cfg);
    REQUIRE_FALSE(t.error.has_value());
    CHECK(t.rows.size() == 2 * 2 * 2);  // grid x scheme x {identity, smoothing}
    for (const auto& r : t.rows) {
        CHECK(r.case_name == "snr");
        CHECK(std::isinf(r.err_var_db));
        CHECK(r.i_error == 0.0);
        CHECK(r.trial_count == 2);
        CHECK(r.mae.has_value());
        CHECK(r.neg_psnr.has_value());
        CHECK(r.one_minus_ssim.has_value());
        CHECK_FALSE(r.external_metric.has_value());
    }
    const auto& mf0 = find_row(t, Scheme::kMf, "identity", 0.0);
    const auto& zf0 = find_row(t, Scheme::kZf, "identity", 0.0);
    CHECK(mf0.gamma_analytic_mean >= zf0.gamma_analytic_mean);
    const auto& zf20 = find_row(t, Scheme::kZf, "identity", 20.0);
    CHECK(zf20.i_precode_mean < 1e-18);
    CHECK(find_row(t, Scheme::kMf, "identity", 20.0).i_precode_mean > 0.0);
    // Identity and operator rows share the link columns.
    CHECK(find_row(t, Scheme::kZf, "smoothing", 20.0).ber_empirical == zf20.ber_empirical);
    CHECK(find_row(t, Scheme::kZf, "smoothing", 20.0).exp_distortion == zf20.exp_distortion);
}

TEST_CASE("ZF beats MF by an order of magnitude at high SNR") {
    ExperimentConfig cfg = small_config();
    cfg.snr_grid_db = {40.0};
    cfg.reconstruction = "identity";
    cfg.image_size = 64;
    cfg.n_channel_trials = 4;
    const ResultTable t = run_snr_sweep(cfg);
    REQUIRE(t.rows.size() == 2);
    const auto& mf = find_row(t, Scheme::kMf, "identity", 40.0);
    const auto& zf = find_row(t, Scheme::kZf, "identity", 40.0);
    CHECK(mf.ber_empirical > 10.0 * zf.ber_empirical);
    CHECK(mf.ber_analytic_mean > 10.0 * zf.ber_analytic_mean);
}

TEST_CASE("perfect-CSI cell of the CSI sweep reproduces the SNR sweep") {
    const ExperimentConfig cfg = small_config();
    const ResultTable snr = run_snr_sweep(cfg);
    const ResultTable csi = run_csi_error_sweep(cfg);
    REQUIRE_FALSE(csi.error.has_value());
    CHECK(csi.rows.size() == 8);
    for (const auto& r : csi.rows) {
        if (!std::isinf(r.err_var_db)) {
            CHECK(r.i_error == doctest::Approx(100.0 * 7 * 0.1));
            continue;
        }
        const ResultRow& s = find_row(snr, r.scheme, r.recon, 20.0);
        CHECK(r.gamma_analytic_mean == s.gamma_analytic_mean);
        CHECK(r.ber_empirical == s.ber_empirical);
        CHECK(r.mae == s.mae);
        CHECK(r.one_minus_ssim == s.one_minus_ssim);
    }
}

TEST_CASE("interference checks agree with the analytic budget") {
    ExperimentConfig cfg = small_config();
    cfg.err_var_grid_db = {-std::numeric_limits<double>::infinity(), -10.0, -3.0};
    cfg.n_channel_trials = 3;
    cfg.interference_draws = 10000;
    const ResultTable t = run_csi_error_sweep(cfg);
    CHECK(t.interference.size() == 3u * 2 * 3 * 8);
    std::map<std::pair<int, double>, std::pair<double, double>> agg;  // (diff, var)
    for (const auto& c : t.interference) {
        if (std::isinf(c.err_var_db)) {
            CHECK(c.empirical == doctest::Approx(c.analytic).epsilon(1e-9));
            continue;
        }
        auto& a = agg[{static_cast<int>(c.scheme), c.err_var_db}];
        a.first += c.empirical - c.analytic;
        a.second += c.empirical_se * c.empirical_se;
    }
    CHECK(agg.size() == 4);
    for (const auto& [key, a] : agg) CHECK(std::abs(a.first) <= 3.0 * std::sqrt(a.second));
}

TEST_CASE("reruns are byte identical and independent of worker count") {
    ExperimentConfig cfg = small_config();
    const std::string a = csv_of(run_snr_sweep(cfg));
    CHECK(a == csv_of(run_snr_sweep(cfg)));
    cfg.workers = 3;
    CHECK(a == csv_of(run_snr_sweep(cfg)));
    cfg.master_seed = 43;
    CHECK(a != csv_of(run_snr_sweep(cfg)));
}

TEST_CASE("cells do not depend on the rest of the grid") {
    ExperimentConfig cfg = small_config();
    const ResultTable both = run_snr_sweep(cfg);
    cfg.snr_grid_db = {20.0};
    const ResultTable one = run_snr_sweep(cfg);
    for (const auto& r : one.rows) {
        const ResultRow& b = find_row(both, r.scheme, r.recon, 20.0);
        CHECK(r.ber_empirical == b.ber_empirical);
        CHECK(r.neg_psnr == b.neg_psnr);
    }
}

TEST_CASE("csv layout") {
    const ResultTable t = run_snr_sweep(small_config());
    std::istringstream in(csv_of(t));
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# reconstruction:", 0) == 0);
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 15);
        CHECK(line.find(",-inf,") != std::string::npos);
    }
    CHECK(rows == 8);

    std::ostringstream stamped;
    write_csv(stamped, t, "run 2026-01-01");
    CHECK(stamped.str().rfind("# run 2026-01-01\n", 0) == 0);
}

TEST_CASE("a failing cell leaves earlier rows and an error row") {
    ExperimentConfig cfg = small_config();
    cfg.reconstruction = "external";
    cfg.operator_command = "false {in} {out}";
    const ResultTable t = run_snr_sweep(cfg);
    REQUIRE(t.error.has_value());
    CHECK(t.rows.empty());
    const std::string csv = csv_of(t);
    const std::string last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
    CHECK(last.rfind("error,", 0) == 0);
    CHECK(std::count(last.begin(), last.end(), ',') == 15);
}

TEST_CASE("external operator through the sweep") {
    ExperimentConfig cfg = small_config();
    cfg.reconstruction = "external";
    cfg.operator_command = "cp {in} {out}";
    cfg.snr_grid_db = {20.0};
    const ResultTable t = run_snr_sweep(cfg);
    REQUIRE_FALSE(t.error.has_value());
    CHECK(find_row(t, Scheme::kZf, "external", 20.0).mae == find_row(t, Scheme::kZf, "identity", 20.0).mae);
}

TEST_CASE("parallel_for runs every index and rethrows") {
    std::vector<int> hits(50, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_WITH(parallel_for(10, 3,
                                   [](std::size_t i) {
                                       if (i == 7 || i == 4) throw std::runtime_error(std::to_string(i));
                                   }),
                      "4");
}

TEST_CASE("log-log slope fit") {
    const std::vector<double> x{1, 2, 4, 8, 16};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
    CHECK(fit_loglog_slope(x, y) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK_THROWS(fit_loglog_slope(std::vector<double>{1}, std::vector<double>{1}));
    CHECK_THROWS(fit_loglog_slope(x, std::vector<double>{1, 2}));
}

TEST_CASE("complexity bench smoke") {
    ExperimentConfig cfg;
    cfg.bench_users = {8, 16, 32};
    cfg.bench_repetitions = 5;
    const BenchResult r = run_complexity_bench(cfg);
    CHECK(r.rows.size() == 6);
    for (const auto& row : r.rows) {
        CHECK(row.n_tx == 2 * row.n_users);
        CHECK(row.median_seconds > 0.0);
    }
    CHECK(std::isfinite(r.slope_mf));
    CHECK(std::isfinite(r.slope_zf));
    CHECK_FALSE(r.zf_over_mf_at_256.has_value());
    std::ostringstream out;
    write_bench_csv(out, r);
    CHECK(out.str().find("loglog_slope") != std::string::npos);
}
