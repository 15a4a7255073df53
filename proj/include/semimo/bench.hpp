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
#include <span>
#include <vector>

#include "semimo/config.hpp"
#include "semimo/precoding.hpp"

namespace semimo {

struct BenchRow {
    Scheme scheme = Scheme::kMf;
    int n_users = 0;
    int n_tx = 0;
    double median_seconds = 0.0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    double slope_mf = 0.0;
    double slope_zf = 0.0;
    /// median ZF time / median MF time at K = 256, when 256 is on the grid.
    std::optional<double> zf_over_mf_at_256;
};

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

/// Times both precoders for every K in config.bench_users with
/// N_t = round(bench_antenna_ratio * K).
BenchResult run_complexity_bench(const ExperimentConfig& config);

void write_bench_csv(std::ostream& out, const BenchResult& result);

}  // namespace semimo
