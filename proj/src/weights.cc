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

#include "l3c/weights.h"

#include <cmath>
#include <random>
#include <set>

#include "l3c/byte_io.h"
#include "l3c/error.h"

namespace l3c {
namespace {

constexpr char kWeightMagic[4] = {'L', '3', 'C', 'W'};
constexpr uint8_t kDtypeF32 = 1;
constexpr int kMaxRank = 8;

using ShapeList = std::vector<std::pair<std::string, std::vector<int>>>;

void AddConv(ShapeList& shapes, const std::string& name, int out, int in,
             int k) {
  shapes.push_back({name + ".weight", {out, in, k, k}});
  shapes.push_back({name + ".bias", {out}});
}

void AddResBlocks(ShapeList& shapes, const std::string& prefix,
                  const NetworkSpec& spec) {
  for (int i = 0; i < spec.resblocks; ++i) {
    const std::string p = prefix + ".res" + std::to_string(i);
    AddConv(shapes, p + ".conv1", spec.filters, spec.filters, 3);
    AddConv(shapes, p + ".conv2", spec.filters, spec.filters, 3);
  }
}

void CheckRange(const char* what, int value, int lo, int hi) {
  if (value < lo || value > hi) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " = " + std::to_string(value) +
                    " outside [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  }
}

}  // namespace

const char* ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLearned: return "learned";
    case ModelKind::kRgb: return "rgb";
    case ModelKind::kRgbShared: return "rgb-shared";
  }
  return "unknown";
}

ModelKind ParseModelKind(std::string_view name) {
  if (name == "learned") return ModelKind::kLearned;
  if (name == "rgb") return ModelKind::kRgb;
  if (name == "rgb-shared" || name == "rgb_shared") return ModelKind::kRgbShared;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mode '" + std::string(name) + "'");
}

int NetworkSpec::HeadChannels(int target) const {
  if (IsRgbScale(target)) return 3 * 3 * mixtures + 3 * mixtures;
  return 3 * latent_channels * mixtures;
}

int NetworkSpec::SymbolChannels(int scale) const {
  return IsRgbScale(scale) ? 3 : latent_channels;
}

int NetworkSpec::SymbolAlphabet(int scale) const {
  return IsRgbScale(scale) ? 256 : levels;
}

void NetworkSpec::Validate() const {
  if (kind != ModelKind::kLearned && kind != ModelKind::kRgb &&
      kind != ModelKind::kRgbShared) {
    throw Error(ErrorCode::kInvalidArgument, "unknown model kind");
  }
  CheckRange("scales", scales, 1, 8);
  CheckRange("filters", filters, 1, 4096);
  CheckRange("latent_channels", latent_channels, 1, 4096);
  CheckRange("mixtures", mixtures, 1, 64);
  CheckRange("resblocks", resblocks, 0, 256);
  CheckRange("levels", levels, 2, 4096);
  if (!(sigma_q > 0.0f) || !std::isfinite(sigma_q)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma_q must be positive");
  }
}

const WeightTensor& ModelWeights::Get(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw Error(ErrorCode::kMissingTensor, name);
  return it->second;
}

std::vector<std::pair<std::string, std::vector<int>>> RequiredTensorShapes(
    const NetworkSpec& spec) {
  spec.Validate();
  ShapeList shapes;
  const int f = spec.filters;
  if (spec.HasExtractors()) {
    for (int s = 1; s <= spec.scales; ++s) {
      const std::string p = "enc" + std::to_string(s);
      AddConv(shapes, p + ".down", f, s == 1 ? 3 : f, 3);
      AddResBlocks(shapes, p, spec);
      AddConv(shapes, p + ".proj", spec.latent_channels, f, 1);
    }
  }
  for (int d = 1; d <= spec.NumPredictors(); ++d) {
    const std::string p = "dec" + std::to_string(d);
    AddConv(shapes, p + ".expand", f, spec.SymbolChannels(d), 1);
    AddResBlocks(shapes, p, spec);
    for (int rate : {1, 2, 4}) {
      AddConv(shapes, p + ".atrous" + std::to_string(rate), f, f, 3);
    }
    AddConv(shapes, p + ".reduce", 4 * f, 3 * f, 1);
    AddConv(shapes, p + ".head", spec.HeadChannels(d - 1), f, 1);
  }
  return shapes;
}

void ValidateWeights(const ModelWeights& weights) {
  const auto shapes = RequiredTensorShapes(weights.spec);
  std::set<std::string> required;
  for (const auto& [name, dims] : shapes) {
    required.insert(name);
    auto it = weights.tensors.find(name);
    if (it == weights.tensors.end()) throw Error(ErrorCode::kMissingTensor, name);
    if (it->second.dims != dims) {
      throw Error(ErrorCode::kShapeMismatch,
                  name + " has shape " + DimsString(it->second.dims) +
                      ", expected " + DimsString(dims));
    }
    if (it->second.data.size() != it->second.NumElements()) {
      throw Error(ErrorCode::kShapeMismatch, name + " data size");
    }
  }
  for (const auto& [name, t] : weights.tensors) {
    if (!required.count(name)) throw Error(ErrorCode::kUnexpectedTensor, name);
  }
}

void AppendTensorTable(const TensorTable& table, std::vector<uint8_t>& out) {
  ByteWriter w(out);
  w.U32(static_cast<uint32_t>(table.size()));
  for (const auto& [name, t] : table) {
    if (t.dims.size() > kMaxRank) {
      throw Error(ErrorCode::kInvalidArgument, name + ": rank too large");
    }
    w.U32(static_cast<uint32_t>(name.size()));
    w.Str(name);
    w.U8(kDtypeF32);
    w.U8(static_cast<uint8_t>(t.dims.size()));
    for (int d : t.dims) w.U32(static_cast<uint32_t>(d));
    if (t.data.size() != t.NumElements()) {
      throw Error(ErrorCode::kShapeMismatch, name + " data size");
    }
    for (float v : t.data) w.F32(v);
  }
}

TensorTable ReadTensorTable(std::span<const uint8_t> bytes, size_t& offset) {
  ByteReader r(bytes, offset);
  const uint32_t count = r.U32();
  TensorTable table;
  for (uint32_t n = 0; n < count; ++n) {
    const uint32_t name_len = r.U32();
    if (name_len > r.remaining()) throw Error(ErrorCode::kTruncated, "tensor name");
    std::string name = r.Str(name_len);
    const uint8_t dtype = r.U8();
    if (dtype != kDtypeF32) {
      throw Error(ErrorCode::kCorruptStream,
                  name + ": unsupported dtype " + std::to_string(dtype));
    }
    const uint8_t rank = r.U8();
    if (rank > kMaxRank) throw Error(ErrorCode::kCorruptStream, name + ": rank");
    WeightTensor t;
    for (int i = 0; i < rank; ++i) t.dims.push_back(static_cast<int>(r.U32()));
    const size_t elems = t.NumElements();
    if (elems > r.remaining() / 4) {
      throw Error(ErrorCode::kTruncated, name + ": tensor data");
    }
    t.data.resize(elems);
    for (size_t i = 0; i < elems; ++i) t.data[i] = r.F32();
    if (!table.emplace(name, std::move(t)).second) {
      throw Error(ErrorCode::kCorruptStream, "duplicate tensor " + name);
    }
  }
  offset = r.position();
  return table;
}

std::vector<uint8_t> SaveWeights(const ModelWeights& weights) {
  ValidateWeights(weights);
  std::vector<uint8_t> out;
  ByteWriter w(out);
  w.Bytes({reinterpret_cast<const uint8_t*>(kWeightMagic), 4});
  w.U32(kWeightFormatVersion);
  const NetworkSpec& s = weights.spec;
  w.U32(static_cast<uint32_t>(s.kind));
  w.U32(s.scales);
  w.U32(s.filters);
  w.U32(s.latent_channels);
  w.U32(s.mixtures);
  w.U32(s.resblocks);
  w.U32(s.levels);
  w.F32(s.sigma_q);
  AppendTensorTable(weights.tensors, out);
  return out;
}

ModelWeights LoadWeights(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  const auto magic = r.Bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kWeightMagic)) {
    throw Error(ErrorCode::kBadMagic, "not a weight file");
  }
  const uint32_t version = r.U32();
  if (version != kWeightFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "weight file version " + std::to_string(version) +
                    ", expected " + std::to_string(kWeightFormatVersion));
  }
  ModelWeights w;
  const uint32_t kind = r.U32();
  if (kind > 2) throw Error(ErrorCode::kInvalidArgument, "unknown model kind");
  w.spec.kind = static_cast<ModelKind>(kind);
  w.spec.scales = static_cast<int>(r.U32());
  w.spec.filters = static_cast<int>(r.U32());
  w.spec.latent_channels = static_cast<int>(r.U32());
  w.spec.mixtures = static_cast<int>(r.U32());
  w.spec.resblocks = static_cast<int>(r.U32());
  w.spec.levels = static_cast<int>(r.U32());
  w.spec.sigma_q = r.F32();
  w.spec.Validate();
  size_t offset = r.position();
  w.tensors = ReadTensorTable(bytes, offset);
  if (offset != bytes.size()) {
    throw Error(ErrorCode::kCorruptStream, "trailing bytes after tensor table");
  }
  ValidateWeights(w);
  return w;
}

ModelWeights RandomWeights(const NetworkSpec& spec, uint64_t seed, float gain) {
  ModelWeights w;
  w.spec = spec;
  std::mt19937_64 rng(seed);
  for (const auto& [name, dims] : RequiredTensorShapes(spec)) {
    WeightTensor t;
    t.dims = dims;
    t.data.resize(t.NumElements());
    const bool is_bias = dims.size() == 1;
    // Uniform with variance gain^2 / fan_in; second convs of residual
    // blocks start small so deep stacks stay well conditioned.
    double fan_in = 1.0;
    for (size_t i = 1; i < dims.size(); ++i) fan_in *= dims[i];
    double bound = gain * std::sqrt(3.0 / fan_in);
    if (name.find(".conv2.") != std::string::npos) bound *= 0.1;
    if (is_bias) bound = 0.1 * gain;
    for (float& v : t.data) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      v = static_cast<float>((2.0 * u - 1.0) * bound);
    }
    w.tensors.emplace(name, std::move(t));
  }
  return w;
}

}  // namespace l3c
