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

#include "l3c/nn_kernels.h"

#include <algorithm>
#include <string>

#include "l3c/error.h"

namespace l3c {
namespace {

void CheckConvShapes(const Tensor& input, const WeightTensor& kernel,
                     const WeightTensor& bias) {
  if (kernel.dims.size() != 4 || bias.dims.size() != 1 ||
      bias.dims[0] != kernel.dims[0]) {
    throw Error(ErrorCode::kShapeMismatch,
                "conv kernel " + DimsString(kernel.dims) + " with bias " +
                    DimsString(bias.dims));
  }
  if (kernel.dims[1] != input.channels()) {
    throw Error(ErrorCode::kShapeMismatch,
                "conv kernel " + DimsString(kernel.dims) + " applied to " +
                    input.ShapeString());
  }
}

// Smallest ox >= 0 with ox * stride + offset >= 0.
int FirstValid(int offset, int stride) {
  if (offset >= 0) return 0;
  return (-offset + stride - 1) / stride;
}

// Largest ox with ox * stride + offset <= limit - 1, or -1.
int LastValid(int offset, int stride, int limit) {
  const int room = limit - 1 - offset;
  if (room < 0) return -1;
  return room / stride;
}

}  // namespace

int ConvOutputSize(int input, int kernel, const ConvGeometry& g) {
  const int effective = g.dilation * (kernel - 1) + 1;
  const int span = input + 2 * g.padding - effective;
  if (span < 0) return 0;
  return span / g.stride + 1;
}

Tensor Conv2d(const Tensor& input, const WeightTensor& kernel,
              const WeightTensor& bias, const ConvGeometry& g) {
  CheckConvShapes(input, kernel, bias);
  const int out_c = kernel.dims[0];
  const int in_c = kernel.dims[1];
  const int kh = kernel.dims[2];
  const int kw = kernel.dims[3];
  const int in_h = input.height();
  const int in_w = input.width();
  const int out_h = ConvOutputSize(in_h, kh, g);
  const int out_w = ConvOutputSize(in_w, kw, g);
  if (out_h <= 0 || out_w <= 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "conv output would be empty for input " + input.ShapeString());
  }
  Tensor out(out_c, out_h, out_w);
  const float* in = input.data();
  const float* w = kernel.data.data();
  const size_t in_plane = input.plane();
  const int stride = g.stride;

#pragma omp parallel for collapse(2) schedule(static)
  for (int o = 0; o < out_c; ++o) {
    for (int oy = 0; oy < out_h; ++oy) {
      float* orow = out.data() + (static_cast<size_t>(o) * out_h + oy) * out_w;
      std::fill(orow, orow + out_w, bias.data[o]);
      for (int i = 0; i < in_c; ++i) {
        for (int ky = 0; ky < kh; ++ky) {
          const int iy = oy * stride + ky * g.dilation - g.padding;
          if (iy < 0 || iy >= in_h) continue;
          const float* irow = in + i * in_plane + static_cast<size_t>(iy) * in_w;
          const float* wrow = w + ((static_cast<size_t>(o) * in_c + i) * kh + ky) * kw;
          for (int kx = 0; kx < kw; ++kx) {
            const int offset = kx * g.dilation - g.padding;
            const int lo = FirstValid(offset, stride);
            const int hi = std::min(LastValid(offset, stride, in_w), out_w - 1);
            const float wv = wrow[kx];
            if (stride == 1) {
              const float* src = irow + offset;
              for (int ox = lo; ox <= hi; ++ox) orow[ox] += wv * src[ox];
            } else {
              for (int ox = lo; ox <= hi; ++ox) {
                orow[ox] += wv * irow[ox * stride + offset];
              }
            }
          }
        }
      }
    }
  }
  return out;
}

void ReluInPlace(Tensor& t) {
  float* d = t.data();
  const size_t n = t.size();
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < n; ++i) d[i] = std::max(d[i], 0.0f);
}

void AddInPlace(Tensor& dst, const Tensor& src) {
  if (!dst.SameShape(src)) {
    throw Error(ErrorCode::kShapeMismatch,
                "cannot add " + src.ShapeString() + " to " + dst.ShapeString());
  }
  float* d = dst.data();
  const float* s = src.data();
  const size_t n = dst.size();
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < n; ++i) d[i] += s[i];
}

Tensor ConcatChannels(std::span<const Tensor> parts) {
  if (parts.empty()) return Tensor();
  int channels = 0;
  for (const Tensor& p : parts) {
    if (p.height() != parts[0].height() || p.width() != parts[0].width()) {
      throw Error(ErrorCode::kShapeMismatch, "concat of " + p.ShapeString() +
                                                 " with " + parts[0].ShapeString());
    }
    channels += p.channels();
  }
  Tensor out(channels, parts[0].height(), parts[0].width());
  float* dst = out.data();
  for (const Tensor& p : parts) dst = std::copy(p.data(), p.data() + p.size(), dst);
  return out;
}

Tensor PixelShuffle(const Tensor& input, int factor) {
  const int r2 = factor * factor;
  if (factor < 1 || input.channels() % r2 != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "pixel shuffle by " + std::to_string(factor) + " needs channels "
                "divisible by " + std::to_string(r2) + ", got " +
                    input.ShapeString());
  }
  const int out_c = input.channels() / r2;
  const int h = input.height();
  const int w = input.width();
  Tensor out(out_c, h * factor, w * factor);
  const int out_w = w * factor;
#pragma omp parallel for collapse(2) schedule(static)
  for (int c = 0; c < out_c; ++c) {
    for (int oy = 0; oy < h * factor; ++oy) {
      const int y = oy / factor;
      const int dy = oy % factor;
      float* orow = out.data() + (static_cast<size_t>(c) * h * factor + oy) * out_w;
      for (int dx = 0; dx < factor; ++dx) {
        const float* irow = input.data() +
                            (static_cast<size_t>(c * r2 + dy * factor + dx) * h + y) * w;
        for (int x = 0; x < w; ++x) orow[x * factor + dx] = irow[x];
      }
    }
  }
  return out;
}

Tensor ResidualBlock(const Tensor& input, const ConvLayer& conv1,
                     const ConvLayer& conv2) {
  Tensor t = Conv2d(input, conv1);
  ReluInPlace(t);
  Tensor out = Conv2d(t, conv2);
  AddInPlace(out, input);
  return out;
}

Tensor AtrousParallel(const Tensor& input, std::span<const ConvLayer> branches) {
  std::vector<Tensor> outs;
  outs.reserve(branches.size());
  for (const ConvLayer& b : branches) {
    outs.push_back(Conv2d(input, b));
    if (!outs.back().SameShape(outs.front())) {
      throw Error(ErrorCode::kShapeMismatch, "atrous branches disagree in shape");
    }
  }
  return ConcatChannels(outs);
}

}  // namespace l3c
