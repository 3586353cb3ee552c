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

#ifndef L3C_WEIGHTS_H_
#define L3C_WEIGHTS_H_

// Network hyperparameters and the portable weight file.
//
// File layout (little-endian):
//   "L3CW"  u32 version
//   u32 kind, scales, filters, latent_channels, mixtures, resblocks, levels
//   f32 sigma_q
//   u32 tensor_count, then per tensor:
//     u32 name_length, name bytes, u8 dtype (1 = f32), u8 rank,
//     u32 dims[rank], f32 data[prod(dims)]

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "l3c/tensor.h"

namespace l3c {

inline constexpr uint32_t kWeightFormatVersion = 1;

enum class ModelKind : uint8_t {
  kLearned = 0,    // learned extractors E and predictors D
  kRgb = 1,        // bicubic pyramid, one predictor per scale
  kRgbShared = 2,  // bicubic pyramid, a single predictor for every scale
};

const char* ModelKindName(ModelKind kind);
// Accepts "learned", "rgb", "rgb-shared" and "rgb_shared".
ModelKind ParseModelKind(std::string_view name);

struct NetworkSpec {
  ModelKind kind = ModelKind::kLearned;
  int scales = 3;
  int filters = 64;
  int latent_channels = 5;
  int mixtures = 10;
  int resblocks = 8;
  int levels = 25;
  float sigma_q = 2.0f;

  // Channels of the parameter tensor predicting scale `target`:
  // 3*3*K + 3*K for RGB targets, 3*C*K for learned latents. Pyramid
  // baselines predict RGB images at every scale.
  int HeadChannels(int target) const;
  // Channels of z^(s); scale 0 is the image.
  int SymbolChannels(int scale) const;
  // 256 for RGB planes, L for learned latents.
  int SymbolAlphabet(int scale) const;
  bool IsRgbScale(int scale) const {
    return scale == 0 || kind != ModelKind::kLearned;
  }
  bool HasExtractors() const { return kind == ModelKind::kLearned; }
  // Weight-set index used for predictor D^(s).
  int PredictorIndex(int scale) const {
    return kind == ModelKind::kRgbShared ? 1 : scale;
  }
  int NumPredictors() const {
    return kind == ModelKind::kRgbShared ? 1 : scales;
  }

  // Throws Error(kInvalidArgument) on out-of-range hyperparameters.
  void Validate() const;
  bool operator==(const NetworkSpec&) const = default;
};

using TensorTable = std::map<std::string, WeightTensor>;

struct ModelWeights {
  NetworkSpec spec;
  TensorTable tensors;

  // Throws Error(kMissingTensor) with the name when absent.
  const WeightTensor& Get(const std::string& name) const;
};

// Every tensor name the spec requires, with its exact shape.
std::vector<std::pair<std::string, std::vector<int>>> RequiredTensorShapes(
    const NetworkSpec& spec);

// Checks names and shapes against the spec. Errors name the offending tensor.
void ValidateWeights(const ModelWeights& weights);

std::vector<uint8_t> SaveWeights(const ModelWeights& weights);
ModelWeights LoadWeights(std::span<const uint8_t> bytes);

// Tensor table section on its own (used by golden bundles).
void AppendTensorTable(const TensorTable& table, std::vector<uint8_t>& out);
TensorTable ReadTensorTable(std::span<const uint8_t> bytes, size_t& offset);

// Deterministic random initialization; `gain` scales all kernels.
ModelWeights RandomWeights(const NetworkSpec& spec, uint64_t seed,
                           float gain = 1.0f);

}  // namespace l3c

#endif  // L3C_WEIGHTS_H_
