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

#include "l3c/codec.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <random>

#include "l3c/byte_io.h"
#include "l3c/entropy_coder.h"
#include "l3c/error.h"
#include "l3c/pyramid.h"

namespace l3c {
namespace {

// Positions whose CDFs are built together before they are coded; bounds the
// CDF buffer to kChunk * (alphabet + 1) entries.
constexpr size_t kChunk = 4096;
constexpr double kNllFloor = 1.0 / 65536.0;

// Where the PMF of one scale comes from.
struct PmfSource {
  enum class Kind { kUniform, kLatent, kRgb };
  Kind kind = Kind::kUniform;
  int alphabet = 0;
  const MixtureParamsLatent* latent = nullptr;
  const MixtureParamsRgb* rgb = nullptr;
  LogisticBinSpec latent_spec{1.0, 0.0, 2};
  bool use_lambda = false;
};

// Runs `fn(i, pmf, scratch)` for i in [0, n) on all threads, each with its
// own buffers, and rethrows the first exception on the calling thread.
template <typename Fn>
void ParallelPositions(size_t n, int alphabet, Fn fn) {
  std::exception_ptr error;
#pragma omp parallel
  {
    std::vector<double> pmf(alphabet);
    PmfQuantizeScratch scratch;
#pragma omp for schedule(static)
    for (size_t i = 0; i < n; ++i) {
      try {
        fn(i, std::span<double>(pmf), scratch);
      } catch (...) {
#pragma omp critical(l3c_codec_error)
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

// Encodes (enc != nullptr) or decodes every channel of `grid` in order.
void CodeScale(const PmfSource& src, SymbolGrid& grid, RangeEncoder* enc,
               RangeDecoder* dec, ScaleStats& stats, bool hash) {
  const size_t plane = grid.plane();
  const int a = src.alphabet;
  const int stride = a + 1;
  stats.cdf_hashes.assign(hash ? grid.channels : 0, 0);
  double ideal = 0.0;
  double nll = 0.0;

  if (src.kind == PmfSource::Kind::kUniform) {
    const IntegerCdf cdf = QuantizePmf(std::vector<double>(a, 1.0 / a));
    const auto cum = cdf.cumulative();
    for (int c = 0; c < grid.channels; ++c) {
      uint64_t h = 0xcbf29ce484222325ull;
      int32_t* values = grid.values.data() + c * plane;
      for (size_t pos = 0; pos < plane; ++pos) {
        if (enc != nullptr) {
          enc->Encode(cum, values[pos]);
        } else {
          values[pos] = dec->Decode(cum);
        }
        ideal += CdfSymbolBits(cum, values[pos]);
        if (hash) h = HashCdf(cum, h);
      }
      if (hash) stats.cdf_hashes[c] = h;
    }
    stats.ideal_bits = ideal;
    stats.nll_bits = static_cast<double>(grid.values.size()) * std::log2(double(a));
    return;
  }

  std::vector<uint32_t> cums;
  std::vector<double> p_true;
  for (int c = 0; c < grid.channels; ++c) {
    std::vector<double> x1;
    std::vector<double> x2;
    if (src.kind == PmfSource::Kind::kRgb && src.use_lambda) {
      if (c >= 1) x1 = CenteredChannel(grid, 0);
      if (c >= 2) x2 = CenteredChannel(grid, 1);
    }
    int32_t* values = grid.values.data() + c * plane;
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t begin = 0; begin < plane; begin += kChunk) {
      const size_t n = std::min(kChunk, plane - begin);
      cums.resize(n * stride);
      p_true.assign(n, 1.0);
      ParallelPositions(n, a, [&](size_t i, std::span<double> pmf,
                                  PmfQuantizeScratch& scratch) {
        const size_t pos = begin + i;
        if (src.kind == PmfSource::Kind::kRgb) {
          PmfRgbAt(*src.rgb, c, pos, x1, x2, pmf, src.use_lambda);
        } else {
          PmfLatentAt(*src.latent, src.latent_spec, c, pos, pmf);
        }
        if (enc != nullptr) p_true[i] = pmf[values[pos]];
        QuantizePmfInto(pmf, kCdfPrecisionBits,
                        std::span<uint32_t>(cums).subspan(i * stride, stride),
                        scratch);
      });
      for (size_t i = 0; i < n; ++i) {
        const std::span<const uint32_t> cum(cums.data() + i * stride, stride);
        int32_t& v = values[begin + i];
        if (enc != nullptr) {
          enc->Encode(cum, v);
          nll -= std::log2(std::max(p_true[i], kNllFloor));
        } else {
          v = dec->Decode(cum);
        }
        ideal += CdfSymbolBits(cum, v);
        if (hash) h = HashCdf(cum, h);
      }
    }
    if (hash) stats.cdf_hashes[c] = h;
  }
  stats.ideal_bits = ideal;
  stats.nll_bits = enc != nullptr ? nll : 0.0;
}

// Parameters for one target scale; keeps the converted grids alive.
struct TargetModel {
  std::optional<MixtureParamsRgb> rgb;
  std::optional<MixtureParamsLatent> latent;
  PmfSource source;
};

TargetModel MakeTarget(const CodecModel& model, int target, const Tensor* head) {
  const NetworkSpec& spec = model.spec();
  TargetModel t;
  t.source.alphabet = spec.SymbolAlphabet(target);
  if (head == nullptr) return t;  // uniform prior
  if (spec.IsRgbScale(target)) {
    t.rgb = RgbParamsFromHead(*head, spec.mixtures);
    t.source.kind = PmfSource::Kind::kRgb;
    t.source.rgb = &*t.rgb;
    // Pyramid levels above the image have no channel autoregression.
    t.source.use_lambda = target == 0;
  } else {
    t.latent = LatentParamsFromHead(*head, spec.latent_channels, spec.mixtures);
    t.source.kind = PmfSource::Kind::kLatent;
    t.source.latent = &*t.latent;
    t.source.latent_spec = LogisticBinSpec::Latent(model.grid());
  }
  return t;
}

SymbolGrid EmptyGrid(const CodecModel& model, int scale, int height, int width) {
  SymbolGrid g{model.spec().SymbolChannels(scale), height, width,
               model.spec().SymbolAlphabet(scale), {}};
  g.values.assign(static_cast<size_t>(g.channels) * height * width, 0);
  return g;
}

ScaleStats StatsFor(const SymbolGrid& g, int scale) {
  ScaleStats st;
  st.scale = scale;
  st.channels = g.channels;
  st.height = g.height;
  st.width = g.width;
  st.alphabet = g.alphabet;
  return st;
}

void CheckCompatible(const CodecModel& model, const Container& c) {
  const NetworkSpec& spec = model.spec();
  if (c.mode != spec.kind || c.scales != spec.scales) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("container was written by a ") + ModelKindName(c.mode) +
                    " model with S=" + std::to_string(c.scales) + ", weights are " +
                    ModelKindName(spec.kind) + " with S=" +
                    std::to_string(spec.scales));
  }
  if (c.Find(spec.scales) == nullptr) {
    throw Error(ErrorCode::kCorruptStream, "top scale is not stored");
  }
  for (const SubStream& s : c.streams) {
    if (s.channels != spec.SymbolChannels(s.scale) ||
        s.height != static_cast<int>(c.padded_height >> s.scale) ||
        s.width != static_cast<int>(c.padded_width >> s.scale)) {
      throw Error(ErrorCode::kCorruptStream,
                  "dimension triplet of scale " + std::to_string(s.scale) +
                      " does not match the model");
    }
  }
}

void DecodeSubStream(const CodecModel& model, const SubStream& sub,
                     const Tensor* head, SymbolGrid& grid, CodecTrace* trace) {
  const TargetModel target = MakeTarget(model, sub.scale, head);
  RangeDecoder dec(sub.payload);
  ScaleStats st = StatsFor(grid, sub.scale);
  CodeScale(target.source, grid, nullptr, &dec, st, trace && trace->hash_cdfs);
  if (dec.position() != sub.payload.size()) {
    throw Error(ErrorCode::kCorruptStream,
                "scale " + std::to_string(sub.scale) + " payload has " +
                    std::to_string(sub.payload.size() - dec.position()) +
                    " unused bytes");
  }
  st.payload_bytes = sub.payload.size();
  if (trace != nullptr) trace->scales.push_back(std::move(st));
}

void SampleScale(const CodecModel& model, int scale, const Tensor& head,
                 std::mt19937_64& rng, SymbolGrid& grid, CodecTrace* trace) {
  const TargetModel target = MakeTarget(model, scale, &head);
  SymbolGrid sampled = target.rgb ? SampleRgb(*target.rgb, rng, target.source.use_lambda)
                                  : SampleLatent(*target.latent,
                                                 target.source.latent_spec, rng);
  grid.values = std::move(sampled.values);
  if (trace != nullptr) {
    ScaleStats st = StatsFor(grid, scale);
    st.sampled = true;
    trace->scales.push_back(std::move(st));
  }
}

// Shared by decoding and sampling: scales >= container.lowest_stored_scale
// are decoded, lower ones sampled with `rng`.
Image Reconstruct(const CodecModel& model, const Container& c,
                  std::mt19937_64* rng, CodecTrace* trace) {
  CheckCompatible(model, c);
  const NetworkSpec& spec = model.spec();
  const int S = spec.scales;
  const int hp = static_cast<int>(c.padded_height);
  const int wp = static_cast<int>(c.padded_width);

  std::vector<SymbolGrid> grids;
  for (int s = 0; s <= S; ++s) grids.push_back(EmptyGrid(model, s, hp >> s, wp >> s));
  DecodeSubStream(model, *c.Find(S), nullptr, grids[S], trace);

  Tensor f;
  for (int s = S; s >= 1; --s) {
    f = model.network().RunPredictor(s, PredictorInput(model, grids[s], s),
                                     s == S ? nullptr : &f);
    const Tensor head = model.network().RunHead(s, f);
    if (trace != nullptr) {
      trace->predictor_passes++;
      trace->head_passes++;
      if (s > 1) {
        trace->stages.push_back("D" + std::to_string(s) + "+head");
      } else {
        trace->stages.push_back("D1");
        trace->stages.push_back("head0");
      }
    }
    if (const SubStream* sub = c.Find(s - 1)) {
      DecodeSubStream(model, *sub, &head, grids[s - 1], trace);
    } else {
      SampleScale(model, s - 1, head, *rng, grids[s - 1], trace);
    }
  }
  Image padded = SymbolsToImage(grids[0]);
  return Crop(padded, 0, 0, static_cast<int>(c.original_width),
              static_cast<int>(c.original_height));
}

}  // namespace

CodecModel::CodecModel(ModelWeights weights)
    : network_(std::make_shared<const ModelWeights>(std::move(weights))),
      grid_(network_.spec().levels, network_.spec().sigma_q) {}

CodecModel LoadModel(const std::string& path) {
  return CodecModel(LoadWeights(ReadFileBytes(path)));
}

const ScaleStats* CodecTrace::Find(int scale) const {
  for (const ScaleStats& s : scales) {
    if (s.scale == scale) return &s;
  }
  return nullptr;
}

Tensor PredictorInput(const CodecModel& model, const SymbolGrid& z, int scale) {
  if (model.spec().IsRgbScale(scale)) return NormalizedImageTensor(z);
  Tensor t(z.channels, z.height, z.width);
  for (size_t i = 0; i < t.size(); ++i) {
    t.data()[i] = static_cast<float>(model.grid().level(z.values[i]));
  }
  return t;
}

ForwardPass RunForward(const CodecModel& model, const Image& padded) {
  const NetworkSpec& spec = model.spec();
  const int S = spec.scales;
  if (padded.width % (1 << S) != 0 || padded.height % (1 << S) != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "image must be padded to a multiple of " + std::to_string(1 << S));
  }
  ForwardPass fp;
  fp.symbols.push_back(ImageToSymbols(padded));
  if (spec.HasExtractors()) {
    Tensor input = NormalizedImageTensor(fp.symbols[0]);
    for (int s = 1; s <= S; ++s) {
      ExtractorOutput e = model.network().RunExtractor(s, input);
      SymbolGrid z{e.latent.channels(), e.latent.height(), e.latent.width(),
                   model.grid().size(), {}};
      z.values.resize(e.latent.size());
      for (size_t i = 0; i < e.latent.size(); ++i) {
        z.values[i] = QuantizeHard(model.grid(), e.latent.data()[i]).index;
      }
      fp.symbols.push_back(std::move(z));
      input = std::move(e.features);
    }
  } else {
    for (int s = 1; s <= S; ++s) {
      fp.symbols.push_back(ImageToSymbols(BicubicDown(padded, 1 << s)));
    }
  }
  fp.heads.resize(S);
  Tensor f;
  for (int s = S; s >= 1; --s) {
    f = model.network().RunPredictor(s, PredictorInput(model, fp.symbols[s], s),
                                     s == S ? nullptr : &f);
    fp.heads[s - 1] = model.network().RunHead(s, f);
  }
  return fp;
}

Container EncodeImage(const CodecModel& model, const Image& image,
                      CodecTrace* trace) {
  const NetworkSpec& spec = model.spec();
  const int S = spec.scales;
  if (image.width < 1 || image.height < 1 ||
      image.pixels.size() != static_cast<size_t>(image.width) * image.height * 3) {
    throw Error(ErrorCode::kInvalidArgument, "empty or malformed image");
  }
  const Image padded = PadToMultiple(image, 1 << S);
  if (padded.width > 0xffff || padded.height > 0xffff) {
    throw Error(ErrorCode::kInvalidArgument, "image too large for the container");
  }
  ForwardPass fp = RunForward(model, padded);
  if (trace != nullptr) {
    trace->extractor_passes += spec.HasExtractors() ? S : 0;
    trace->predictor_passes += S;
    trace->head_passes += S;
  }

  Container c;
  c.mode = spec.kind;
  c.scales = S;
  c.original_height = image.height;
  c.original_width = image.width;
  c.padded_height = padded.height;
  c.padded_width = padded.width;
  c.checksum = ImageChecksum(image);
  for (int s = S; s >= 0; --s) {
    const TargetModel target = MakeTarget(model, s, s == S ? nullptr : &fp.heads[s]);
    SymbolGrid& grid = fp.symbols[s];
    RangeEncoder enc;
    ScaleStats st = StatsFor(grid, s);
    CodeScale(target.source, grid, &enc, nullptr, st, trace && trace->hash_cdfs);
    SubStream sub{s, grid.channels, grid.height, grid.width, enc.Finish().bytes};
    st.payload_bytes = sub.payload.size();
    c.streams.push_back(std::move(sub));
    if (trace != nullptr) trace->scales.push_back(std::move(st));
  }
  return c;
}

std::vector<uint8_t> EncodeImageBytes(const CodecModel& model, const Image& image,
                                      CodecTrace* trace) {
  return SerializeContainer(EncodeImage(model, image, trace));
}

Image DecodeImage(const CodecModel& model, const Container& container,
                  CodecTrace* trace) {
  if (container.lowest_stored_scale != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "container stores scales " +
                    std::to_string(container.lowest_stored_scale) +
                    " and up only; use sampling");
  }
  Image image = Reconstruct(model, container, nullptr, trace);
  if (ImageChecksum(image) != container.checksum) {
    throw Error(ErrorCode::kChecksumMismatch,
                "decoded image does not match the stored checksum");
  }
  return image;
}

Image DecodeImageBytes(const CodecModel& model, std::span<const uint8_t> bytes,
                       CodecTrace* trace) {
  return DecodeImage(model, ParseContainer(bytes), trace);
}

Image SampleImage(const CodecModel& model, const Container& container,
                  uint64_t seed, CodecTrace* trace) {
  if (container.lowest_stored_scale == 0) return DecodeImage(model, container, trace);
  std::mt19937_64 rng(seed);
  return Reconstruct(model, container, &rng, trace);
}

double StoredBitFraction(const Container& full, int k) {
  size_t stored = 0;
  size_t total = 0;
  for (const SubStream& s : full.streams) {
    total += s.payload.size();
    if (s.scale >= k) stored += s.payload.size();
  }
  return total == 0 ? 1.0 : static_cast<double>(stored) / total;
}

double Bpsp(size_t bytes, int width, int height) {
  return 8.0 * static_cast<double>(bytes) / (3.0 * width * height);
}

uint64_t HashCdf(std::span<const uint32_t> values, uint64_t h) {
  for (uint32_t v : values) {
    for (int i = 0; i < 4; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace l3c
