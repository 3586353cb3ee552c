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

#ifndef L3C_CODEC_H_
#define L3C_CODEC_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "l3c/container.h"
#include "l3c/dlm.h"
#include "l3c/image.h"
#include "l3c/network.h"
#include "l3c/quantizer.h"
#include "l3c/weights.h"

namespace l3c {

class CodecModel {
 public:
  // Validates the weights against their embedded spec.
  explicit CodecModel(ModelWeights weights);

  const NetworkSpec& spec() const { return network_.spec(); }
  const Network& network() const { return network_; }
  const ModelWeights& weights() const { return network_.weights(); }
  const LevelGrid& grid() const { return grid_; }

 private:
  Network network_;
  LevelGrid grid_;
};

// Reads and validates a weight file; the mode is taken from the file.
CodecModel LoadModel(const std::string& path);

// All symbols and parameter tensors of one image.
struct ForwardPass {
  std::vector<SymbolGrid> symbols;  // z^(0) (padded image) .. z^(S)
  std::vector<Tensor> heads;        // heads[t] parameterizes z^(t), t < S
};

// Extractors (or the bicubic pyramid) followed by every predictor and head.
// `padded` must have dimensions divisible by 2^S.
ForwardPass RunForward(const CodecModel& model, const Image& padded);

// Values fed to D^(s) for the symbols of scale s: quantizer levels for
// learned latents, x / 127.5 - 1 for RGB grids.
Tensor PredictorInput(const CodecModel& model, const SymbolGrid& z, int scale);

struct ScaleStats {
  int scale = 0;
  int channels = 0;
  int height = 0;
  int width = 0;
  int alphabet = 0;
  // -log2 of the model PMF at the true symbols (floored at 2^-16), or the
  // uniform prior cost for the top scale. Encoder only.
  double nll_bits = 0.0;
  // -log2 of the integer CDF counts actually used by the coder.
  double ideal_bits = 0.0;
  size_t payload_bytes = 0;
  bool sampled = false;
  // FNV-1a over every cumulative table of each channel, when requested.
  std::vector<uint64_t> cdf_hashes;

  size_t symbols() const {
    return static_cast<size_t>(channels) * height * width;
  }
};

struct CodecTrace {
  bool hash_cdfs = false;  // input: compute ScaleStats::cdf_hashes
  std::vector<ScaleStats> scales;  // in coding order, S first
  // Decoder network stages, e.g. "D3+head", ..., "D1", "head0": every
  // predictor D^(s) is one stage (with the latent head it feeds for s > 1)
  // and the RGB head is one more.
  std::vector<std::string> stages;
  int extractor_passes = 0;
  int predictor_passes = 0;
  int head_passes = 0;

  const ScaleStats* Find(int scale) const;
};

Container EncodeImage(const CodecModel& model, const Image& image,
                      CodecTrace* trace = nullptr);
std::vector<uint8_t> EncodeImageBytes(const CodecModel& model, const Image& image,
                                      CodecTrace* trace = nullptr);

// Requires every scale to be stored. Throws Error(kChecksumMismatch) when
// the reconstruction does not match the stored checksum, and
// Error(kCorruptStream) when a payload is not consumed exactly.
Image DecodeImage(const CodecModel& model, const Container& container,
                  CodecTrace* trace = nullptr);
Image DecodeImageBytes(const CodecModel& model, std::span<const uint8_t> bytes,
                       CodecTrace* trace = nullptr);

// Decodes the stored scales and samples the missing ones down to the image.
// With every scale stored this equals DecodeImage.
Image SampleImage(const CodecModel& model, const Container& container,
                  uint64_t seed, CodecTrace* trace = nullptr);

// Payload bits of scales >= k over all payload bits of `full`.
double StoredBitFraction(const Container& full, int k);

// 8 * bytes / (3 * H * W).
double Bpsp(size_t bytes, int width, int height);

// FNV-1a 64 over the little-endian bytes of `values`, continuing from `h`.
uint64_t HashCdf(std::span<const uint32_t> values,
                 uint64_t h = 0xcbf29ce484222325ull);

}  // namespace l3c

#endif  // L3C_CODEC_H_
