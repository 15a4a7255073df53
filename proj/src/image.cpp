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

#include "semimo/image.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace semimo {

Image to_unit(const GrayImage& gray) {
    Image out{gray.width, gray.height, std::vector<double>(gray.size())};
    std::transform(gray.pixels.begin(), gray.pixels.end(), out.pixels.begin(),
                   [](std::uint8_t v) { return v / 255.0; });
    return out;
}

GrayImage to_gray(const Image& image) {
    GrayImage out{image.width, image.height, std::vector<std::uint8_t>(image.size())};
    std::transform(image.pixels.begin(), image.pixels.end(), out.pixels.begin(), [](double v) {
        const double level = std::clamp(std::round(v * 255.0), 0.0, 255.0);
        return static_cast<std::uint8_t>(level);
    });
    return out;
}

Image constant_image(int width, int height, double value) {
    return Image{width, height,
                 std::vector<double>(static_cast<std::size_t>(width) * height, value)};
}

double image_distance(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("image_distance: dimension mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.pixels[i] - b.pixels[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!token.empty()) break;
            continue;
        }
        token.push_back(static_cast<char>(c));
    }
    return token;
}

int parse_positive(const std::string& token, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used != token.size() || v <= 0) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("PGM: bad ") + what + " '" + token + "'");
    }
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("PGM: cannot open " + path.string());
    if (next_token(in) != "P5") throw std::runtime_error("PGM: " + path.string() + " is not binary P5");
    GrayImage img;
    img.width = parse_positive(next_token(in), "width");
    img.height = parse_positive(next_token(in), "height");
    const int maxval = parse_positive(next_token(in), "maxval");
    if (maxval > 255) throw std::runtime_error("PGM: 16-bit images are not supported");
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.size())) {
        throw std::runtime_error("PGM: truncated pixel data in " + path.string());
    }
    if (maxval != 255) {
        for (auto& p : img.pixels) {
            p = static_cast<std::uint8_t>(std::lround(std::min<int>(p, maxval) * 255.0 / maxval));
        }
    }
    return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("PGM: cannot write " + path.string());
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.size()));
    if (!out) throw std::runtime_error("PGM: write failed for " + path.string());
}

GrayImage synthetic_test_image(int width, int height) {
    if (width < 1 || height < 1) throw std::invalid_argument("synthetic_test_image: empty size");
    GrayImage img{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height)};
    const double w = width;
    const double h = height;
    const double band_top = 0.68 * h;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double x = (c + 0.5) / w;
            const double y = (r + 0.5) / h;
            double v = 40.0 + 150.0 * (0.6 * x + 0.4 * y);

            const double dx = x - 0.3, dy = y - 0.32;
            if (dx * dx + dy * dy < 0.04) v = 225.0;
            if (x > 0.58 && x < 0.9 && y > 0.15 && y < 0.5) v = 25.0 + 40.0 * y;

            if (r >= band_top) {
                // three bands, each doubling the stripe frequency
                const int band = std::min(2, static_cast<int>((r - band_top) / ((h - band_top) / 3.0)));
                const double freq = 4.0 * std::pow(2.0, band);
                v = 128.0 + 90.0 * std::sin(2.0 * std::numbers::pi * freq * x) * (0.7 + 0.3 * y);
            }
            img.pixels[static_cast<std::size_t>(r) * width + c] =
                static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return img;
}

}  // namespace semimo
