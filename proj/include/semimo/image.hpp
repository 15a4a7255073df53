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
#include <vector>

namespace semimo {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::size_t size() const noexcept { return pixels.size(); }
    bool operator==(const GrayImage&) const = default;
};

/// Real-valued raster on the [0,1] pixel scale (255 -> 1). Reconstruction
/// operators and metrics work in this representation; values are not clamped.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    std::size_t size() const noexcept { return pixels.size(); }
    double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
    bool operator==(const Image&) const = default;
};

Image to_unit(const GrayImage& gray);
/// Rounds to the nearest level and clamps into [0,255].
GrayImage to_gray(const Image& image);

Image constant_image(int width, int height, double value);

/// Euclidean norm of the pixel difference on the [0,1] scale.
double image_distance(const Image& a, const Image& b);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Deterministic test card: diagonal gradient, a disc, a rectangle and
/// horizontal texture bands of increasing spatial frequency.
GrayImage synthetic_test_image(int width, int height);

}  // namespace semimo
