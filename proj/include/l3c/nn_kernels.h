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

#ifndef L3C_NN_KERNELS_H_
#define L3C_NN_KERNELS_H_

// OpenMP-parallel inference kernels. Each output element is produced by a
// single thread with a fixed accumulation order (bias, then input channel,
// kernel row, kernel column), so results do not depend on the thread count
// and match the serial versions in reference_kernels.h bit for bit.

#include <span>

#include "l3c/tensor.h"

namespace l3c {

struct ConvGeometry {
  int stride = 1;
  int dilation = 1;
  int padding = 0;
};

struct ConvLayer {
  const WeightTensor* kernel = nullptr;  // [out][in][kh][kw]
  const WeightTensor* bias = nullptr;    // [out]
  ConvGeometry geometry;
};

int ConvOutputSize(int input, int kernel, const ConvGeometry& g);

// Cross-correlation with zero padding. Throws Error(kShapeMismatch) when
// the kernel does not fit the input.
Tensor Conv2d(const Tensor& input, const WeightTensor& kernel,
              const WeightTensor& bias, const ConvGeometry& geometry);
inline Tensor Conv2d(const Tensor& input, const ConvLayer& layer) {
  return Conv2d(input, *layer.kernel, *layer.bias, layer.geometry);
}

void ReluInPlace(Tensor& t);
void AddInPlace(Tensor& dst, const Tensor& src);

Tensor ConcatChannels(std::span<const Tensor> parts);

// [C * r^2, H, W] -> [C, r * H, r * W];
// out(c, r*y + dy, r*x + dx) = in(c * r^2 + dy * r + dx, y, x).
Tensor PixelShuffle(const Tensor& input, int factor);

// input + conv2(relu(conv1(input))).
Tensor ResidualBlock(const Tensor& input, const ConvLayer& conv1,
                     const ConvLayer& conv2);

// Runs every branch on `input` and concatenates the outputs along channels.
Tensor AtrousParallel(const Tensor& input, std::span<const ConvLayer> branches);

}  // namespace l3c

#endif  // L3C_NN_KERNELS_H_
