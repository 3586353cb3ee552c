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

#ifndef L3C_GOLDEN_H_
#define L3C_GOLDEN_H_

// Golden vector bundles: frozen (weights, input, intermediates, container)
// sets used to check that two implementations of the model agree.
//
// A bundle is a directory holding
//   weights.l3cw    weight file
//   input.ppm       the input crop
//   golden.l3cg     "L3CG", u32 version, then a tensor table (see
//                   weights.h) with z1..zS ([C, H', W'] level indices stored
//                   as f32), head0..head{S-1} (raw head outputs) and
//                   nll_bits ([S+1], indexed by scale)
//   container.l3c   the compressed input

#include <string>
#include <vector>

#include "l3c/codec.h"

namespace l3c {

inline constexpr uint32_t kGoldenFormatVersion = 1;

struct GoldenVector {
  Image input;
  std::vector<SymbolGrid> latents;  // z^(1) .. z^(S)
  std::vector<Tensor> heads;        // parameters of z^(0) .. z^(S-1)
  std::vector<double> nll_bits;     // per scale 0..S
  std::vector<uint8_t> container;
};

GoldenVector ComputeGolden(const CodecModel& model, const Image& input);

void WriteGoldenBundle(const std::string& dir, const ModelWeights& weights,
                       const GoldenVector& golden);

struct GoldenBundle {
  ModelWeights weights;
  GoldenVector golden;
};
GoldenBundle ReadGoldenBundle(const std::string& dir);

struct GoldenReport {
  double max_head_abs_diff = 0.0;
  size_t latent_mismatches = 0;
  double max_nll_abs_diff = 0.0;
  bool container_identical = false;
  bool shapes_match = true;

  bool Passed(double tolerance) const {
    return shapes_match && latent_mismatches == 0 &&
           max_head_abs_diff <= tolerance && container_identical;
  }
};

// Recomputes `golden` with `model` and compares.
GoldenReport CheckGolden(const CodecModel& model, const GoldenVector& golden);

}  // namespace l3c

#endif  // L3C_GOLDEN_H_
