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

#include "l3c/golden.h"

#include <cmath>
#include <filesystem>

#include "l3c/byte_io.h"
#include "l3c/error.h"

namespace l3c {
namespace {

constexpr char kGoldenMagic[4] = {'L', '3', 'C', 'G'};

WeightTensor FromTensor(const Tensor& t) {
  return {{t.channels(), t.height(), t.width()},
          std::vector<float>(t.values().begin(), t.values().end())};
}

WeightTensor FromGrid(const SymbolGrid& g) {
  WeightTensor w{{g.channels, g.height, g.width}, {}};
  w.data.assign(g.values.begin(), g.values.end());
  return w;
}

Tensor ToTensor(const WeightTensor& w, const std::string& name) {
  if (w.dims.size() != 3) throw Error(ErrorCode::kShapeMismatch, name + " rank");
  Tensor t(w.dims[0], w.dims[1], w.dims[2]);
  std::copy(w.data.begin(), w.data.end(), t.data());
  return t;
}

const WeightTensor& Need(const TensorTable& table, const std::string& name) {
  auto it = table.find(name);
  if (it == table.end()) throw Error(ErrorCode::kMissingTensor, name);
  return it->second;
}

}  // namespace

GoldenVector ComputeGolden(const CodecModel& model, const Image& input) {
  const int S = model.spec().scales;
  GoldenVector g;
  g.input = input;
  const ForwardPass fp = RunForward(model, PadToMultiple(input, 1 << S));
  g.latents.assign(fp.symbols.begin() + 1, fp.symbols.end());
  g.heads = fp.heads;
  CodecTrace trace;
  g.container = EncodeImageBytes(model, input, &trace);
  g.nll_bits.assign(S + 1, 0.0);
  for (const ScaleStats& st : trace.scales) g.nll_bits[st.scale] = st.nll_bits;
  return g;
}

void WriteGoldenBundle(const std::string& dir, const ModelWeights& weights,
                       const GoldenVector& golden) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  WriteFileBytes((root / "weights.l3cw").string(), SaveWeights(weights));
  WriteFileBytes((root / "input.ppm").string(), EncodePpm(golden.input));
  WriteFileBytes((root / "container.l3c").string(), golden.container);

  TensorTable table;
  for (size_t i = 0; i < golden.latents.size(); ++i) {
    table["z" + std::to_string(i + 1)] = FromGrid(golden.latents[i]);
  }
  for (size_t t = 0; t < golden.heads.size(); ++t) {
    table["head" + std::to_string(t)] = FromTensor(golden.heads[t]);
  }
  WeightTensor nll{{static_cast<int>(golden.nll_bits.size())}, {}};
  for (double b : golden.nll_bits) nll.data.push_back(static_cast<float>(b));
  table["nll_bits"] = std::move(nll);

  std::vector<uint8_t> out;
  ByteWriter w(out);
  w.Bytes({reinterpret_cast<const uint8_t*>(kGoldenMagic), 4});
  w.U32(kGoldenFormatVersion);
  AppendTensorTable(table, out);
  WriteFileBytes((root / "golden.l3cg").string(), out);
}

GoldenBundle ReadGoldenBundle(const std::string& dir) {
  const std::filesystem::path root(dir);
  GoldenBundle b;
  b.weights = LoadWeights(ReadFileBytes((root / "weights.l3cw").string()));
  b.golden.input = ReadImage((root / "input.ppm").string());
  b.golden.container = ReadFileBytes((root / "container.l3c").string());

  const std::vector<uint8_t> bytes = ReadFileBytes((root / "golden.l3cg").string());
  ByteReader r(bytes);
  const auto magic = r.Bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kGoldenMagic)) {
    throw Error(ErrorCode::kBadMagic, "not a golden tensor file");
  }
  const uint32_t version = r.U32();
  if (version != kGoldenFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "golden file version " + std::to_string(version));
  }
  size_t offset = r.position();
  const TensorTable table = ReadTensorTable(bytes, offset);
  const NetworkSpec& spec = b.weights.spec;
  for (int s = 1; s <= spec.scales; ++s) {
    const std::string name = "z" + std::to_string(s);
    const Tensor t = ToTensor(Need(table, name), name);
    SymbolGrid g{t.channels(), t.height(), t.width(), spec.SymbolAlphabet(s), {}};
    for (float v : t.values()) g.values.push_back(static_cast<int32_t>(std::lround(v)));
    b.golden.latents.push_back(std::move(g));
  }
  for (int t = 0; t < spec.scales; ++t) {
    const std::string name = "head" + std::to_string(t);
    b.golden.heads.push_back(ToTensor(Need(table, name), name));
  }
  for (float v : Need(table, "nll_bits").data) b.golden.nll_bits.push_back(v);
  return b;
}

GoldenReport CheckGolden(const CodecModel& model, const GoldenVector& golden) {
  const GoldenVector mine = ComputeGolden(model, golden.input);
  GoldenReport rep;
  rep.container_identical = mine.container == golden.container;
  if (mine.latents.size() != golden.latents.size() ||
      mine.heads.size() != golden.heads.size() ||
      mine.nll_bits.size() != golden.nll_bits.size()) {
    rep.shapes_match = false;
    return rep;
  }
  for (size_t i = 0; i < mine.latents.size(); ++i) {
    const SymbolGrid& a = mine.latents[i];
    const SymbolGrid& b = golden.latents[i];
    if (a.channels != b.channels || a.height != b.height || a.width != b.width) {
      rep.shapes_match = false;
      continue;
    }
    for (size_t j = 0; j < a.values.size(); ++j) {
      rep.latent_mismatches += a.values[j] != b.values[j];
    }
  }
  for (size_t i = 0; i < mine.heads.size(); ++i) {
    if (!mine.heads[i].SameShape(golden.heads[i])) {
      rep.shapes_match = false;
      continue;
    }
    for (size_t j = 0; j < mine.heads[i].size(); ++j) {
      rep.max_head_abs_diff =
          std::max(rep.max_head_abs_diff,
                   std::abs(double(mine.heads[i].data()[j]) - golden.heads[i].data()[j]));
    }
  }
  for (size_t s = 0; s < mine.nll_bits.size(); ++s) {
    rep.max_nll_abs_diff =
        std::max(rep.max_nll_abs_diff, std::abs(mine.nll_bits[s] - golden.nll_bits[s]));
  }
  return rep;
}

}  // namespace l3c
