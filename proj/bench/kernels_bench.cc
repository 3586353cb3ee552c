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

// Parallel kernels against their serial references, plus the per-symbol
// costs on the coding path. Run with OMP_NUM_THREADS to vary the team size.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "l3c/codec.h"
#include "l3c/dlm.h"
#include "l3c/entropy_coder.h"
#include "l3c/nn_kernels.h"
#include "l3c/reference_kernels.h"

namespace l3c {
namespace {

Tensor RandomTensor(int c, int h, int w, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  Tensor t(c, h, w);
  for (float& v : t.values()) v = u(rng);
  return t;
}

WeightTensor RandomWeight(std::vector<int> dims, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-0.1f, 0.1f);
  WeightTensor w;
  w.dims = std::move(dims);
  w.data.resize(w.NumElements());
  for (float& v : w.data) v = u(rng);
  return w;
}

enum Impl { kParallel = 0, kReference = 1 };

// Args: impl, channels, spatial size.
void BM_Conv3x3(benchmark::State& state) {
  const int c = static_cast<int>(state.range(1));
  const int n = static_cast<int>(state.range(2));
  const Tensor in = RandomTensor(c, n, n, 1);
  const WeightTensor k = RandomWeight({c, c, 3, 3}, 2);
  const WeightTensor b = RandomWeight({c}, 3);
  const ConvGeometry g{1, 1, 1};
  for (auto _ : state) {
    Tensor out = state.range(0) == kParallel ? Conv2d(in, k, b, g)
                                             : reference::Conv2d(in, k, b, g);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * int64_t{c} * c * 9 * n * n);
}
BENCHMARK(BM_Conv3x3)
    ->ArgNames({"ref", "C", "N"})
    ->ArgsProduct({{kParallel, kReference}, {16, 64}, {32, 64}})
    ->Unit(benchmark::kMillisecond);

void BM_PixelShuffle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(1));
  const Tensor in = RandomTensor(4 * 64, n, n, 4);
  for (auto _ : state) {
    Tensor out = state.range(0) == kParallel ? PixelShuffle(in, 2)
                                             : reference::PixelShuffle(in, 2);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(state.iterations() * int64_t(in.size()) * sizeof(float));
}
BENCHMARK(BM_PixelShuffle)
    ->ArgNames({"ref", "N"})
    ->ArgsProduct({{kParallel, kReference}, {32, 64}})
    ->Unit(benchmark::kMicrosecond);

void BM_ResidualBlock(benchmark::State& state) {
  const int c = 32;
  const int n = static_cast<int>(state.range(1));
  const Tensor in = RandomTensor(c, n, n, 5);
  const WeightTensor k1 = RandomWeight({c, c, 3, 3}, 6), b1 = RandomWeight({c}, 7);
  const WeightTensor k2 = RandomWeight({c, c, 3, 3}, 8), b2 = RandomWeight({c}, 9);
  const ConvLayer l1{&k1, &b1, {1, 1, 1}}, l2{&k2, &b2, {1, 1, 1}};
  for (auto _ : state) {
    Tensor out = state.range(0) == kParallel ? ResidualBlock(in, l1, l2)
                                             : reference::ResidualBlock(in, l1, l2);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ResidualBlock)
    ->ArgNames({"ref", "N"})
    ->ArgsProduct({{kParallel, kReference}, {32, 64}})
    ->Unit(benchmark::kMillisecond);

// Integer CDF construction from a mixture PMF, per symbol.
void BM_QuantizePmf(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LogisticBinSpec spec{1.0, 0.0, n};
  std::vector<double> pmf(n);
  const std::vector<double> pi{0.5, 0.3, 0.2}, mu{n * 0.3, n * 0.5, n * 0.6},
      sigma{2.0, 0.7, 10.0};
  MixturePmf(pi, mu, sigma, spec, pmf);
  std::vector<uint32_t> cum(n + 1);
  PmfQuantizeScratch scratch;
  for (auto _ : state) {
    QuantizePmfInto(pmf, kCdfPrecisionBits, cum, scratch);
    benchmark::DoNotOptimize(cum.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_QuantizePmf)->Arg(25)->Arg(256);

void BM_MixturePmf(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const LogisticBinSpec spec = LogisticBinSpec::Rgb();
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pi(K), mu(K), sigma(K), pmf(spec.num_bins);
  for (int k = 0; k < K; ++k) {
    pi[k] = 1.0 / K;
    mu[k] = -127.5 + 255.0 * u(rng);
    sigma[k] = 0.5 + 20.0 * u(rng);
  }
  for (auto _ : state) {
    MixturePmf(pi, mu, sigma, spec, pmf);
    benchmark::DoNotOptimize(pmf.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MixturePmf)->Arg(1)->Arg(10);

void BM_RangeCoder(benchmark::State& state) {
  const IntegerCdf cdf = IntegerCdf::Uniform(256);
  std::mt19937_64 rng(11);
  std::vector<int> symbols(1 << 16);
  for (int& s : symbols) s = static_cast<int>(rng() & 255);
  for (auto _ : state) {
    RangeEncoder enc;
    for (int s : symbols) enc.Encode(cdf, s);
    Bitstream bits = enc.Finish();
    RangeDecoder dec(bits.bytes);
    int sum = 0;
    for (size_t i = 0; i < symbols.size(); ++i) sum += dec.Decode(cdf);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * int64_t(symbols.size()));
}
BENCHMARK(BM_RangeCoder);

void BM_EncodeImage(benchmark::State& state) {
  NetworkSpec spec;
  spec.kind = static_cast<ModelKind>(state.range(0));
  spec.filters = 16;
  spec.mixtures = 5;
  spec.resblocks = 2;
  const CodecModel model(RandomWeights(spec, 12));
  const int n = 64;
  Image img(n, n);
  std::mt19937_64 rng(13);
  for (auto& v : img.pixels) v = static_cast<uint8_t>(rng());
  for (auto _ : state) {
    std::vector<uint8_t> bytes = EncodeImageBytes(model, img);
    benchmark::DoNotOptimize(bytes.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_EncodeImage)->ArgName("mode")->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace l3c

BENCHMARK_MAIN();
