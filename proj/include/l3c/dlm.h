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

#ifndef L3C_DLM_H_
#define L3C_DLM_H_

// Discretized logistic mixtures over a uniform bin grid.
//
// RGB sub-pixels are modelled in a centered domain (x - 127.5) with unit
// bins; latents use the quantizer levels in [-1, 1]. Probabilities are
// differences of logistic CDFs at bin edges, and the two outermost bins
// absorb the tails.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "l3c/quantizer.h"
#include "l3c/tensor.h"

namespace l3c {

inline constexpr double kSigmaMin = 1e-3;
inline constexpr double kRgbCenter = 127.5;
inline constexpr int kRgbAlphabet = 256;

struct LogisticBinSpec {
  double bin_width;
  double domain_min;
  int num_bins;

  double domain_max() const { return domain_min + bin_width * (num_bins - 1); }
  double BinCenter(int j) const { return domain_min + bin_width * j; }

  // {-127.5, ..., 127.5} with unit bins.
  static LogisticBinSpec Rgb();
  // The quantizer grid levels.
  static LogisticBinSpec Latent(const LevelGrid& grid);
};

inline double Sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Mass of bin `bin` under a single discretized logistic.
double LogisticBinProb(int bin, double mu, double sigma,
                       const LogisticBinSpec& spec);

// Mixture PMF at one position. `pi`, `mu`, `sigma` hold K entries each and
// `pmf` receives spec.num_bins entries.
void MixturePmf(std::span<const double> pi, std::span<const double> mu,
                std::span<const double> sigma, const LogisticBinSpec& spec,
                std::span<double> pmf);

// Per-position parameters for the three RGB channels. All grids are
// channel-major [channel][k][y][x]; lambda grids are [k][y][x].
struct MixtureParamsRgb {
  int mixtures = 0;
  int height = 0;
  int width = 0;
  std::vector<float> pi;
  std::vector<float> mu;
  std::vector<float> sigma;
  std::vector<float> lambda_alpha;
  std::vector<float> lambda_beta;
  std::vector<float> lambda_gamma;

  size_t plane() const { return static_cast<size_t>(height) * width; }
  size_t Index(int c, int k, size_t pos) const {
    return (static_cast<size_t>(c) * mixtures + k) * plane() + pos;
  }
};

// Parameters for a latent grid with `channels` channels, [c][k][y][x].
struct MixtureParamsLatent {
  int channels = 0;
  int mixtures = 0;
  int height = 0;
  int width = 0;
  std::vector<float> pi;
  std::vector<float> mu;
  std::vector<float> sigma;

  size_t plane() const { return static_cast<size_t>(height) * width; }
  size_t Index(int c, int k, size_t pos) const {
    return (static_cast<size_t>(c) * mixtures + k) * plane() + pos;
  }
};

// Integer symbols on a [channels][y][x] grid.
struct SymbolGrid {
  int channels = 0;
  int height = 0;
  int width = 0;
  int alphabet = 0;
  std::vector<int32_t> values;

  size_t plane() const { return static_cast<size_t>(height) * width; }
  std::span<const int32_t> Channel(int c) const {
    return std::span<const int32_t>(values).subspan(c * plane(), plane());
  }
};

// Head channel layout for the RGB target (12K channels):
//   [0, 3K) pi logits, [3K, 6K) mu, [6K, 9K) log sigma, then K channels each
//   of lambda_alpha, lambda_beta, lambda_gamma (pre-tanh).
// Links: pi = softmax over k, sigma = max(exp(raw), kSigmaMin), lambda = tanh.
MixtureParamsRgb RgbParamsFromHead(const Tensor& head, int mixtures);

// Head layout for a latent target (3CK channels): [0, CK) pi logits,
// [CK, 2CK) mu, [2CK, 3CK) log sigma, with index c * K + k inside each block.
MixtureParamsLatent LatentParamsFromHead(const Tensor& head, int channels,
                                         int mixtures);

// Means after conditioning on earlier channels, [3][K][y][x]. `x1` and `x2`
// are centered sub-pixel values (x - 127.5); pass an empty span for a
// channel that is not known yet, which leaves the dependent means untouched.
std::vector<double> UpdateMeansRgb(const MixtureParamsRgb& params,
                                   std::span<const double> x1,
                                   std::span<const double> x2);

// Centered values of one RGB channel plane.
std::vector<double> CenteredChannel(const SymbolGrid& rgb, int channel);

// PMF over 256 values for `channel` at position `pos`. Channel 1 requires
// x1, channel 2 requires x1 and x2 (centered); otherwise throws.
// When `use_lambda` is false the means are not updated.
void PmfRgbAt(const MixtureParamsRgb& params, int channel, size_t pos,
              std::span<const double> x1, std::span<const double> x2,
              std::span<double> pmf, bool use_lambda = true);

// Whole-plane form, [pos][256].
std::vector<double> PmfRgb(const MixtureParamsRgb& params, int channel,
                           std::span<const double> x1,
                           std::span<const double> x2);

void PmfLatentAt(const MixtureParamsLatent& params, const LogisticBinSpec& spec,
                 int channel, size_t pos, std::span<double> pmf);

// [c][pos][L].
std::vector<double> PmfLatent(const MixtureParamsLatent& params,
                              const LogisticBinSpec& spec);

// Sum of -log2 p over `symbols`, with p floored at 2^-16. `pmfs` holds
// symbols.size() consecutive PMFs of `alphabet` entries.
double NllBits(std::span<const double> pmfs, int alphabet,
               std::span<const int32_t> symbols);

// Inverse-CDF draw from a PMF given u in [0, 1).
int SampleFromPmf(std::span<const double> pmf, double u);

// Uniform double in [0, 1) from the top 53 bits of the generator.
inline double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SymbolGrid SampleLatent(const MixtureParamsLatent& params,
                        const LogisticBinSpec& spec, std::mt19937_64& rng);

// Samples channel 1, updates means, then channels 2 and 3.
SymbolGrid SampleRgb(const MixtureParamsRgb& params, std::mt19937_64& rng,
                     bool use_lambda = true);

}  // namespace l3c

#endif  // L3C_DLM_H_
