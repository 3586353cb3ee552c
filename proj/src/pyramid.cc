// Copyright 2026 The L3C-cpp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "l3c/pyramid.h"

#include <algorithm>
#include <cmath>

#include "l3c/error.h"

namespace l3c {
namespace {

constexpr double kA = -0.5;

struct Taps {
  int index[4];
  double weight[4];
};

// Four taps around the source coordinate of output sample `i`.
std::vector<Taps> ComputeTaps(int out_size, int in_size, int factor) {
  std::vector<Taps> taps(out_size);
  for (int i = 0; i < out_size; ++i) {
    const double center = (i + 0.5) * factor - 0.5;
    const int base = static_cast<int>(std::floor(center));
    const double frac = center - base;
    for (int k = 0; k < 4; ++k) {
      taps[i].index[k] = std::clamp(base - 1 + k, 0, in_size - 1);
      taps[i].weight[k] = CubicWeight(frac - (k - 1));
    }
  }
  return taps;
}

}  // namespace

double CubicWeight(double t) {
  t = std::abs(t);
  if (t <= 1.0) return ((kA + 2.0) * t - (kA + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((kA * t - 5.0 * kA) * t + 8.0 * kA) * t - 4.0 * kA;
  return 0.0;
}

Image BicubicDown(const Image& image, int factor) {
  if (factor < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "downsampling factor " + std::to_string(factor));
  }
  if (factor == 1) return image;
  const int out_w = (image.width + factor - 1) / factor;
  const int out_h = (image.height + factor - 1) / factor;
  const std::vector<Taps> tx = ComputeTaps(out_w, image.width, factor);
  const std::vector<Taps> ty = ComputeTaps(out_h, image.height, factor);

  // Horizontal pass into doubles, then vertical pass with rounding.
  std::vector<double> rows(static_cast<size_t>(image.height) * out_w * 3);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < out_w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double v = 0.0;
        for (int k = 0; k < 4; ++k) v += tx[x].weight[k] * image.at(tx[x].index[k], y, c);
        rows[(static_cast<size_t>(y) * out_w + x) * 3 + c] = v;
      }
    }
  }
  Image out(out_w, out_h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double v = 0.0;
        for (int k = 0; k < 4; ++k) {
          v += ty[y].weight[k] * rows[(static_cast<size_t>(ty[y].index[k]) * out_w + x) * 3 + c];
        }
        out.at(x, y, c) = static_cast<uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

std::vector<Image> BuildPyramid(const Image& image, int scales) {
  std::vector<Image> levels;
  levels.reserve(scales + 1);
  for (int s = 0; s <= scales; ++s) levels.push_back(BicubicDown(image, 1 << s));
  return levels;
}

}  // namespace l3c
