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

#include "semimo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "semimo/external.hpp"
#include "semimo/random.hpp"

namespace semimo {

namespace {

void require_same_shape(const Image& a, const Image& b, const char* who) {
    if (a.width != b.width || a.height != b.height || a.size() != b.size()) {
        throw std::invalid_argument(std::string(who) + ": image dimensions differ");
    }
}

// Summed-area table with a zero first row/column.
class Integral {
public:
    Integral(int width, int height) : w_(width + 1), data_(static_cast<std::size_t>(w_) * (height + 1), 0.0) {}

    template <typename F>
    void build(int width, int height, F value) {
        for (int r = 0; r < height; ++r) {
            double row = 0.0;
            for (int c = 0; c < width; ++c) {
                row += value(r, c);
                at(r + 1, c + 1) = at(r, c + 1) + row;
            }
        }
    }
    double box(int r0, int c0, int size) const {
        return at(r0 + size, c0 + size) - at(r0, c0 + size) - at(r0 + size, c0) + at(r0, c0);
    }

private:
    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * w_ + c]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * w_ + c]; }
    int w_;
    std::vector<double> data_;
};

}  // namespace

double psnr(const Image& ref, const Image& test, double cap) {
    require_same_shape(ref, test, "psnr");
    if (ref.size() == 0) throw std::invalid_argument("psnr: empty image");
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double d = ref.pixels[i] - test.pixels[i];
        sum += d * d;
    }
    const double mse = sum / static_cast<double>(ref.size());
    if (mse == 0.0) return cap;
    return -10.0 * std::log10(mse);
}

double ssim(const Image& ref, const Image& test, const SsimConfig& config) {
    require_same_shape(ref, test, "ssim");
    const int win = config.window;
    if (win < 1 || ref.width < win || ref.height < win) {
        throw std::invalid_argument("ssim: image smaller than the " + std::to_string(win) + "x" +
                                    std::to_string(win) + " window");
    }
    const int w = ref.width, h = ref.height;
    Integral sx(w, h), sy(w, h), sxx(w, h), syy(w, h), sxy(w, h);
    sx.build(w, h, [&](int r, int c) { return ref.at(r, c); });
    sy.build(w, h, [&](int r, int c) { return test.at(r, c); });
    sxx.build(w, h, [&](int r, int c) { return ref.at(r, c) * ref.at(r, c); });
    syy.build(w, h, [&](int r, int c) { return test.at(r, c) * test.at(r, c); });
    sxy.build(w, h, [&](int r, int c) { return ref.at(r, c) * test.at(r, c); });

    const double c1 = config.k1 * config.k1;
    const double c2 = config.k2 * config.k2;
    const double n = static_cast<double>(win) * win;
    double total = 0.0;
    long count = 0;
    for (int r = 0; r + win <= h; ++r) {
        for (int c = 0; c + win <= w; ++c) {
            const double mx = sx.box(r, c, win) / n;
            const double my = sy.box(r, c, win) / n;
            const double vx = sxx.box(r, c, win) / n - mx * mx;
            const double vy = syy.box(r, c, win) / n - my * my;
            const double cxy = sxy.box(r, c, win) / n - mx * my;
            total += ((2 * mx * my + c1) * (2 * cxy + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

double mae(const Image& ref, const Image& test) {
    require_same_shape(ref, test, "mae");
    if (ref.size() == 0) throw std::invalid_argument("mae: empty image");
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) sum += std::abs(ref.pixels[i] - test.pixels[i]);
    return sum / static_cast<double>(ref.size());
}

double external_metric(const std::string& command_template, const Image& ref, const Image& test) {
    require_same_shape(ref, test, "external_metric");
    const auto ref_path = scratch_path("ref", ".pgm");
    const auto test_path = scratch_path("test", ".pgm");
    write_pgm(ref_path, to_gray(ref));
    write_pgm(test_path, to_gray(test));
    std::string output;
    try {
        output = run_command_capture(substitute_placeholders(
            command_template, {{"ref", ref_path.string()}, {"test", test_path.string()}}));
    } catch (...) {
        std::filesystem::remove(ref_path);
        std::filesystem::remove(test_path);
        throw;
    }
    std::filesystem::remove(ref_path);
    std::filesystem::remove(test_path);

    std::istringstream in(output);
    double value = 0.0;
    if (!(in >> value)) throw ExternalCommandError("external metric printed no number: '" + output + "'");
    return value;
}

MetricReport evaluate_metrics(const Image& ref, const Image& test, const MetricOptions& options) {
    MetricReport report;
    report.neg_psnr = -psnr(ref, test, options.psnr_cap);
    report.one_minus_ssim = 1.0 - ssim(ref, test, options.ssim);
    report.mae = mae(ref, test);
    if (options.external_command) {
        report.external = {options.external_name, external_metric(*options.external_command, ref, test)};
    }
    return report;
}

std::string metric_metadata(const MetricOptions& options) {
    std::ostringstream out;
    out << "ssim: uniform " << options.ssim.window << "x" << options.ssim.window
        << " windows, stride 1, C1=(" << options.ssim.k1 << "*255)^2, C2=(" << options.ssim.k2
        << "*255)^2; psnr: 10log10(255^2/MSE), cap " << options.psnr_cap
        << " dB at MSE=0, not globally Lipschitz; mae: unit pixel scale, l_M=1/sqrt(N)";
    return out.str();
}

double metric_lipschitz_probe(const MetricFn& metric, const Image& reference,
                              std::span<const std::pair<Image, Image>> samples) {
    double best = 0.0;
    for (const auto& [u, v] : samples) {
        const double dist = image_distance(u, v);
        if (dist == 0.0) continue;
        best = std::max(best, std::abs(metric(u, reference) - metric(v, reference)) / dist);
    }
    return best;
}

double metric_lipschitz_probe(const MetricFn& metric, const Image& reference, int n_samples,
                              double scale, std::uint64_t seed) {
    std::vector<std::pair<Image, Image>> pairs;
    pairs.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        auto engine = make_engine(SeedSpec{seed, static_cast<std::uint64_t>(i)}, Stream::kProbe);
        std::normal_distribution<double> gauss(0.0, scale);
        Image u = reference, v = reference;
        for (auto& p : u.pixels) p += gauss(engine);
        for (auto& p : v.pixels) p += gauss(engine);
        pairs.emplace_back(std::move(u), std::move(v));
    }
    return metric_lipschitz_probe(metric, reference, pairs);
}

}  // namespace semimo
