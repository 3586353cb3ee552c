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

#include "l3c/reference_kernels.h"

#include <algorithm>

#include "l3c/error.h"

namespace l3c::reference {

Tensor Conv2d(const Tensor& input, const WeightTensor& kernel,
              const WeightTensor& bias, const ConvGeometry& g) {
  if (kernel.dims.size() != 4 || kernel.dims[1] != input.channels() ||
      bias.dims.size() != 1 || bias.dims[0] != kernel.dims[0]) {
    throw Error(ErrorCode::kShapeMismatch, "reference conv shapes");
  }
  const int out_c = kernel.dims[0];
  const int in_c = kernel.dims[1];
  const int kh = kernel.dims[2];
  const int kw = kernel.dims[3];
  const int out_h = ConvOutputSize(input.height(), kh, g);
  const int out_w = ConvOutputSize(input.width(), kw, g);
  Tensor out(out_c, out_h, out_w);
  for (int o = 0; o < out_c; ++o) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        float acc = bias.data[o];
        for (int i = 0; i < in_c; ++i) {
          for (int ky = 0; ky < kh; ++ky) {
            for (int kx = 0; kx < kw; ++kx) {
              const int iy = oy * g.stride + ky * g.dilation - g.padding;
              const int ix = ox * g.stride + kx * g.dilation - g.padding;
              if (iy < 0 || iy >= input.height() || ix < 0 || ix >= input.width()) {
                continue;
              }
              const float wv = kernel.data[((o * in_c + i) * kh + ky) * kw + kx];
              acc += wv * input.at(i, iy, ix);
            }
          }
        }
        out.at(o, oy, ox) = acc;
      }
    }
  }
  return out;
}

Tensor PixelShuffle(const Tensor& input, int factor) {
  const int r2 = factor * factor;
  if (input.channels() % r2 != 0) {
    throw Error(ErrorCode::kShapeMismatch, "reference pixel shuffle channels");
  }
  Tensor out(input.channels() / r2, input.height() * factor,
             input.width() * factor);
  for (int c = 0; c < input.channels(); ++c) {
    const int oc = c / r2;
    const int dy = (c % r2) / factor;
    const int dx = c % factor;
    for (int y = 0; y < input.height(); ++y) {
      for (int x = 0; x < input.width(); ++x) {
        out.at(oc, y * factor + dy, x * factor + dx) = input.at(c, y, x);
      }
    }
  }
  return out;
}

Tensor ResidualBlock(const Tensor& input, const ConvLayer& conv1,
                     const ConvLayer& conv2) {
  Tensor t = reference::Conv2d(input, *conv1.kernel, *conv1.bias, conv1.geometry);
  for (float& v : t.values()) v = std::max(v, 0.0f);
  Tensor out = reference::Conv2d(t, *conv2.kernel, *conv2.bias, conv2.geometry);
  for (size_t i = 0; i < out.size(); ++i) out.data()[i] += input.data()[i];
  return out;
}

}  // namespace l3c::reference
