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

#include "semimo/bench.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace semimo {

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_loglog_slope: need two or more paired samples");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_loglog_slope: non-positive sample");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_loglog_slope: x values are all equal");
    return (n * sxy - sx * sy) / denom;
}

BenchResult run_complexity_bench(const ExperimentConfig& config) {
    config.validate();
    BenchResult result;
    std::vector<double> ks, t_mf, t_zf;
    for (double k_value : config.bench_users) {
        const int k = static_cast<int>(k_value);
        const int n_tx = static_cast<int>(std::lround(config.bench_antenna_ratio * k));
        const double mf = precoder_cost_probe(Scheme::kMf, n_tx, k, config.bench_repetitions, config.master_seed);
        const double zf = precoder_cost_probe(Scheme::kZf, n_tx, k, config.bench_repetitions, config.master_seed);
        result.rows.push_back({Scheme::kMf, k, n_tx, mf});
        result.rows.push_back({Scheme::kZf, k, n_tx, zf});
        ks.push_back(k);
        t_mf.push_back(mf);
        t_zf.push_back(zf);
        if (k == 256) result.zf_over_mf_at_256 = zf / mf;
    }
    if (ks.size() >= 2) {
        result.slope_mf = fit_loglog_slope(ks, t_mf);
        result.slope_zf = fit_loglog_slope(ks, t_zf);
    }
    return result;
}

void write_bench_csv(std::ostream& out, const BenchResult& result) {
    char buf[160];
    out << "kind,scheme,n_users,n_tx,value\n";
    for (const auto& r : result.rows) {
        std::snprintf(buf, sizeof buf, "median_seconds,%s,%d,%d,%.6e\n",
                      std::string(to_string(r.scheme)).c_str(), r.n_users, r.n_tx, r.median_seconds);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "loglog_slope,MF,,,%.4f\nloglog_slope,ZF,,,%.4f\n", result.slope_mf,
                  result.slope_zf);
    out << buf;
    if (result.zf_over_mf_at_256) {
        std::snprintf(buf, sizeof buf, "zf_over_mf_time,,256,,%.2f\n", *result.zf_over_mf_at_256);
        out << buf;
    }
}

}  // namespace semimo
