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

#ifndef L3C_PYRAMID_H_
#define L3C_PYRAMID_H_

#include <vector>

#include "l3c/image.h"

namespace l3c {

// Catmull-Rom cubic kernel (a = -0.5).
double CubicWeight(double t);

// Separable bicubic resampling by an integer `factor` >= 1. Output pixel i
// samples the source at (i + 0.5) * factor - 0.5 with four taps spaced one
// source pixel apart, edges clamped; results are rounded and clamped to
// [0, 255]. Output dimensions are ceil(H / factor) x ceil(W / factor).
Image BicubicDown(const Image& image, int factor);

// Levels 0..scales with level s = BicubicDown(image, 2^s).
std::vector<Image> BuildPyramid(const Image& image, int scales);

}  // namespace l3c

#endif  // L3C_PYRAMID_H_
