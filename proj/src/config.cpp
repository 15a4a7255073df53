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

#include "semimo/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace semimo {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& text) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + t + "'");
    }
}

long to_long(const std::string& text) {
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const long v = std::stol(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("not an integer: '" + t + "'");
    }
}

int to_int(const std::string& text) {
    const long v = to_long(text);
    if (v < INT32_MIN || v > INT32_MAX) throw ConfigError("integer out of range: " + text);
    return static_cast<int>(v);
}

std::uint64_t to_u64(const std::string& text) {
    const std::string t = trim(text);
    try {
        if (!t.empty() && t[0] == '-') throw std::invalid_argument(t);
        std::size_t used = 0;
        const auto v = std::stoull(t, &used, 0);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("not an unsigned integer: '" + t + "'");
    }
}

}  // namespace

ExperimentConfig::ExperimentConfig()
    : snr_grid_db(parse_grid("-5:2.5:20")), err_var_grid_db(parse_grid("-20:2:0")) {}

bool ExperimentConfig::wants_metric(const std::string& name) const {
    return std::find(metrics.begin(), metrics.end(), name) != metrics.end();
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    for (const auto& item : split(trim(text), ',')) {
        if (item.find(':') == std::string::npos) {
            grid.push_back(to_double(item));
            continue;
        }
        const auto parts = split(item, ':');
        if (parts.size() != 3) throw ConfigError("range must be start:step:stop, got '" + item + "'");
        const double start = to_double(parts[0]);
        const double step = to_double(parts[1]);
        const double stop = to_double(parts[2]);
        if (!(step > 0.0) || stop < start) throw ConfigError("empty or non-increasing range '" + item + "'");
        const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * step);
    }
    if (grid.empty()) throw ConfigError("empty grid");
    return grid;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (n_users < 1) fail("n_users must be >= 1");
    if (n_tx < n_users) fail("n_tx must be >= n_users");
    if (n_users != 8) fail("n_users must be 8: one user per bit plane of an 8-bit image");
    if (qam_order < 4 || (qam_order & (qam_order - 1)) != 0 ||
        static_cast<int>(std::lround(std::log2(qam_order))) % 2 != 0) {
        fail("qam_order must be a square power of two (4, 16, 64, ...)");
    }
    if (!(noise_var > 0.0)) fail("noise_var must be > 0");
    if (snr_grid_db.empty()) fail("snr_grid_db must not be empty");
    if (err_var_grid_db.empty()) fail("err_var_grid_db must not be empty");
    for (double v : snr_grid_db) {
        if (!std::isfinite(v)) fail("snr_grid_db entries must be finite");
    }
    for (double v : err_var_grid_db) {
        if (std::isnan(v) || v == INFINITY) fail("err_var_grid_db entries must be finite or -inf");
    }
    if (!std::isfinite(fixed_snr_db)) fail("fixed_snr_db must be finite");
    if (n_channel_trials < 1 || n_frames < 1) fail("trial and frame counts must be >= 1");
    static const std::vector<std::string> recon{"identity", "smoothing", "affine", "external"};
    if (std::find(recon.begin(), recon.end(), reconstruction) == recon.end()) {
        fail("reconstruction must be identity, smoothing, affine or external");
    }
    if (!(smoothing_strength >= 0.0)) fail("smoothing_strength must be >= 0");
    if (!(affine_factor >= 0.0 && affine_factor <= 1.0)) fail("affine_factor must lie in [0,1]");
    if (affine_anchor != "smoothed" && affine_anchor != "flat") fail("affine_anchor must be smoothed or flat");
    if (reconstruction == "external" && operator_command.empty()) {
        fail("reconstruction = external needs operator_command");
    }
    for (const auto& m : metrics) {
        if (m != "mae" && m != "psnr" && m != "ssim" && m != "external") fail("unknown metric '" + m + "'");
    }
    if (wants_metric("external") && metric_command.empty()) fail("metric external needs metric_command");
    if (equalizer != "true" && equalizer != "known") fail("equalizer must be true or known");
    if (image_size < 8) fail("image_size must be >= 8 (one SSIM window)");
    if (interference_draws < 1) fail("interference_draws must be >= 1");
    if (bench_users.empty()) fail("bench_users must not be empty");
    for (double k : bench_users) {
        if (!(k >= 1.0) || k != std::floor(k)) fail("bench_users must be positive integers");
    }
    if (!(bench_antenna_ratio >= 1.0)) fail("bench_antenna_ratio must be >= 1");
    if (bench_repetitions < 1) fail("bench_repetitions must be >= 1");
    if (workers < 1) fail("workers must be >= 1");
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    using Setter = std::function<void(const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"n_tx", [&](const std::string& v) { cfg.n_tx = to_int(v); }},
        {"n_users", [&](const std::string& v) { cfg.n_users = to_int(v); }},
        {"qam_order", [&](const std::string& v) { cfg.qam_order = to_int(v); }},
        {"noise_var", [&](const std::string& v) { cfg.noise_var = to_double(v); }},
        {"snr_grid_db", [&](const std::string& v) { cfg.snr_grid_db = parse_grid(v); }},
        {"err_var_grid_db", [&](const std::string& v) { cfg.err_var_grid_db = parse_grid(v); }},
        {"fixed_snr_db", [&](const std::string& v) { cfg.fixed_snr_db = to_double(v); }},
        {"n_channel_trials", [&](const std::string& v) { cfg.n_channel_trials = to_int(v); }},
        {"n_frames", [&](const std::string& v) { cfg.n_frames = to_int(v); }},
        {"reconstruction", [&](const std::string& v) { cfg.reconstruction = v; }},
        {"smoothing_strength", [&](const std::string& v) { cfg.smoothing_strength = to_double(v); }},
        {"affine_factor", [&](const std::string& v) { cfg.affine_factor = to_double(v); }},
        {"affine_anchor", [&](const std::string& v) { cfg.affine_anchor = v; }},
        {"affine_anchor_strength", [&](const std::string& v) { cfg.affine_anchor_strength = to_double(v); }},
        {"operator_command", [&](const std::string& v) { cfg.operator_command = v; }},
        {"metrics", [&](const std::string& v) { cfg.metrics = split(v, ','); }},
        {"metric_command", [&](const std::string& v) { cfg.metric_command = v; }},
        {"equalizer", [&](const std::string& v) { cfg.equalizer = v; }},
        {"image", [&](const std::string& v) { cfg.image = v; }},
        {"image_size", [&](const std::string& v) { cfg.image_size = to_int(v); }},
        {"interference_draws", [&](const std::string& v) { cfg.interference_draws = to_long(v); }},
        {"bench_users", [&](const std::string& v) { cfg.bench_users = parse_grid(v); }},
        {"bench_antenna_ratio", [&](const std::string& v) { cfg.bench_antenna_ratio = to_double(v); }},
        {"bench_repetitions", [&](const std::string& v) { cfg.bench_repetitions = to_int(v); }},
        {"master_seed", [&](const std::string& v) { cfg.master_seed = to_u64(v); }},
        {"workers", [&](const std::string& v) { cfg.workers = to_int(v); }},
        {"output", [&](const std::string& v) { cfg.output = v; }},
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        try {
            it->second(value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + " (" + key + "): " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in);
}

}  // namespace semimo
