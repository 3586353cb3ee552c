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

#include "l3c/dlm.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "l3c/error.h"

namespace l3c {
namespace {

// Beyond |t| = 40 the logistic CDF is within 5e-18 of 0 or 1.
constexpr double kSaturation = 40.0;
constexpr double kNllFloor = 1.0 / 65536.0;

// Logistic CDF at the upper edge of each bin j in [0, n-2]; edges left of
// `lo` are treated as 0 and edges right of `hi` as 1.
struct EdgeCdf {
  double first_edge;
  double bin_width;
  double mu;
  double inv_sigma;
  int lo;
  int hi;

  EdgeCdf(double mu_in, double sigma, const LogisticBinSpec& spec)
      : first_edge(spec.domain_min + 0.5 * spec.bin_width),
        bin_width(spec.bin_width),
        mu(mu_in),
        inv_sigma(1.0 / sigma) {
    const double span = kSaturation * sigma;
    const int last_edge = spec.num_bins - 2;
    const double lo_f = std::ceil((mu - span - first_edge) / bin_width);
    const double hi_f = std::floor((mu + span - first_edge) / bin_width);
    lo = static_cast<int>(std::clamp(lo_f, 0.0, double(last_edge + 1)));
    hi = static_cast<int>(std::clamp(hi_f, -1.0, double(last_edge)));
  }

  double operator()(int j) const {
    if (j < lo) return 0.0;
    if (j > hi) return 1.0;
    return Sigmoid((first_edge + j * bin_width - mu) * inv_sigma);
  }
};

void AddComponent(double weight, double mu, double sigma,
                  const LogisticBinSpec& spec, std::span<double> pmf) {
  const EdgeCdf cdf(mu, sigma, spec);
  // exp(-t) over evenly spaced edges is geometric; inside the saturation
  // window it stays within [e^-40, e^40].
  double e = 0.0;
  double ratio = 0.0;
  if (cdf.lo <= cdf.hi) {
    e = std::exp(-(cdf.first_edge + cdf.lo * cdf.bin_width - mu) * cdf.inv_sigma);
    ratio = std::exp(-cdf.bin_width * cdf.inv_sigma);
  }
  double prev = 0.0;
  for (int j = cdf.lo; j <= cdf.hi; ++j) {
    const double c = 1.0 / (1.0 + e);
    pmf[j] += weight * (c - prev);
    prev = c;
    e *= ratio;
  }
  pmf[cdf.hi + 1] += weight * (1.0 - prev);
}

void CheckHead(const Tensor& head, int expected, const char* what) {
  if (head.channels() != expected) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + " head has " +
                    std::to_string(head.channels()) + " channels, expected " +
                    std::to_string(expected));
  }
}

// Softmax over k of logits[(base + k) * plane + pos], written to `out`
// at the same stride.
void SoftmaxOverK(const float* logits, int mixtures, size_t plane,
                  float* out) {
  for (size_t pos = 0; pos < plane; ++pos) {
    double m = logits[pos];
    for (int k = 1; k < mixtures; ++k) m = std::max(m, double(logits[k * plane + pos]));
    double z = 0.0;
    for (int k = 0; k < mixtures; ++k) z += std::exp(logits[k * plane + pos] - m);
    for (int k = 0; k < mixtures; ++k) {
      out[k * plane + pos] =
          static_cast<float>(std::exp(logits[k * plane + pos] - m) / z);
    }
  }
}

float SigmaLink(float raw) {
  return static_cast<float>(std::max(std::exp(double(raw)), kSigmaMin));
}

void CheckFinite(const Tensor& head) {
  for (float v : head.values()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite network output");
    }
  }
}

}  // namespace

LogisticBinSpec LogisticBinSpec::Rgb() {
  return {1.0, -kRgbCenter, kRgbAlphabet};
}

LogisticBinSpec LogisticBinSpec::Latent(const LevelGrid& grid) {
  return {grid.spacing(), grid.level(0), grid.size()};
}

double LogisticBinProb(int bin, double mu, double sigma,
                       const LogisticBinSpec& spec) {
  const EdgeCdf cdf(mu, sigma, spec);
  const double upper = bin == spec.num_bins - 1 ? 1.0 : cdf(bin);
  const double lower = bin == 0 ? 0.0 : cdf(bin - 1);
  return upper - lower;
}

void MixturePmf(std::span<const double> pi, std::span<const double> mu,
                std::span<const double> sigma, const LogisticBinSpec& spec,
                std::span<double> pmf) {
  std::fill(pmf.begin(), pmf.end(), 0.0);
  for (size_t k = 0; k < pi.size(); ++k) AddComponent(pi[k], mu[k], sigma[k], spec, pmf);
}

MixtureParamsRgb RgbParamsFromHead(const Tensor& head, int mixtures) {
  CheckHead(head, 12 * mixtures, "RGB");
  CheckFinite(head);
  MixtureParamsRgb p;
  p.mixtures = mixtures;
  p.height = head.height();
  p.width = head.width();
  const size_t plane = p.plane();
  const size_t block = 3 * mixtures * plane;
  p.pi.resize(block);
  p.mu.assign(head.data() + block, head.data() + 2 * block);
  p.sigma.resize(block);
  const float* logits = head.data();
  for (int c = 0; c < 3; ++c) {
    SoftmaxOverK(logits + c * mixtures * plane, mixtures, plane,
                 p.pi.data() + c * mixtures * plane);
  }
  const float* raw_sigma = head.data() + 2 * block;
  for (size_t i = 0; i < block; ++i) p.sigma[i] = SigmaLink(raw_sigma[i]);
  const size_t lambda_block = mixtures * plane;
  auto tanh_block = [&](int which) {
    const float* src = head.data() + 3 * block + which * lambda_block;
    std::vector<float> out(lambda_block);
    for (size_t i = 0; i < lambda_block; ++i) out[i] = std::tanh(src[i]);
    return out;
  };
  p.lambda_alpha = tanh_block(0);
  p.lambda_beta = tanh_block(1);
  p.lambda_gamma = tanh_block(2);
  return p;
}

MixtureParamsLatent LatentParamsFromHead(const Tensor& head, int channels,
                                         int mixtures) {
  CheckHead(head, 3 * channels * mixtures, "latent");
  CheckFinite(head);
  MixtureParamsLatent p;
  p.channels = channels;
  p.mixtures = mixtures;
  p.height = head.height();
  p.width = head.width();
  const size_t plane = p.plane();
  const size_t block = static_cast<size_t>(channels) * mixtures * plane;
  p.pi.resize(block);
  for (int c = 0; c < channels; ++c) {
    SoftmaxOverK(head.data() + c * mixtures * plane, mixtures, plane,
                 p.pi.data() + c * mixtures * plane);
  }
  p.mu.assign(head.data() + block, head.data() + 2 * block);
  p.sigma.resize(block);
  const float* raw_sigma = head.data() + 2 * block;
  for (size_t i = 0; i < block; ++i) p.sigma[i] = SigmaLink(raw_sigma[i]);
  return p;
}

std::vector<double> UpdateMeansRgb(const MixtureParamsRgb& params,
                                   std::span<const double> x1,
                                   std::span<const double> x2) {
  const size_t plane = params.plane();
  const int K = params.mixtures;
  if ((!x1.empty() && x1.size() != plane) || (!x2.empty() && x2.size() != plane)) {
    throw Error(ErrorCode::kShapeMismatch, "conditioning plane size");
  }
  std::vector<double> out(params.mu.begin(), params.mu.end());
  if (x1.empty()) return out;
  for (int k = 0; k < K; ++k) {
    for (size_t pos = 0; pos < plane; ++pos) {
      const size_t l = k * plane + pos;
      out[params.Index(1, k, pos)] += params.lambda_alpha[l] * x1[pos];
      double m3 = params.lambda_beta[l] * x1[pos];
      if (!x2.empty()) m3 += params.lambda_gamma[l] * x2[pos];
      out[params.Index(2, k, pos)] += m3;
    }
  }
  return out;
}

std::vector<double> CenteredChannel(const SymbolGrid& rgb, int channel) {
  std::vector<double> out(rgb.plane());
  const auto src = rgb.Channel(channel);
  for (size_t i = 0; i < out.size(); ++i) out[i] = src[i] - kRgbCenter;
  return out;
}

void PmfRgbAt(const MixtureParamsRgb& params, int channel, size_t pos,
              std::span<const double> x1, std::span<const double> x2,
              std::span<double> pmf, bool use_lambda) {
  if (channel < 0 || channel > 2) {
    throw Error(ErrorCode::kInvalidArgument, "RGB channel out of range");
  }
  if (use_lambda && ((channel >= 1 && x1.empty()) || (channel == 2 && x2.empty()))) {
    throw Error(ErrorCode::kInvalidArgument,
                "RGB channel " + std::to_string(channel + 1) +
                    " requires the previous channels");
  }
  constexpr int kMaxMixtures = 64;
  const int K = params.mixtures;
  if (K > kMaxMixtures) throw Error(ErrorCode::kInvalidArgument, "too many mixtures");
  double pi[kMaxMixtures], mu[kMaxMixtures], sigma[kMaxMixtures];
  const size_t plane = params.plane();
  for (int k = 0; k < K; ++k) {
    const size_t i = params.Index(channel, k, pos);
    pi[k] = params.pi[i];
    sigma[k] = params.sigma[i];
    double m = params.mu[i];
    if (use_lambda) {
      const size_t l = k * plane + pos;
      if (channel == 1) {
        m += params.lambda_alpha[l] * x1[pos];
      } else if (channel == 2) {
        m += params.lambda_beta[l] * x1[pos] + params.lambda_gamma[l] * x2[pos];
      }
    }
    mu[k] = m;
  }
  static const LogisticBinSpec kRgbSpec = LogisticBinSpec::Rgb();
  MixturePmf({pi, size_t(K)}, {mu, size_t(K)}, {sigma, size_t(K)}, kRgbSpec, pmf);
}

std::vector<double> PmfRgb(const MixtureParamsRgb& params, int channel,
                           std::span<const double> x1,
                           std::span<const double> x2) {
  const size_t plane = params.plane();
  std::vector<double> out(plane * kRgbAlphabet);
  for (size_t pos = 0; pos < plane; ++pos) {
    PmfRgbAt(params, channel, pos, x1, x2,
             std::span<double>(out).subspan(pos * kRgbAlphabet, kRgbAlphabet));
  }
  return out;
}

void PmfLatentAt(const MixtureParamsLatent& params, const LogisticBinSpec& spec,
                 int channel, size_t pos, std::span<double> pmf) {
  constexpr int kMaxMixtures = 64;
  const int K = params.mixtures;
  if (K > kMaxMixtures) throw Error(ErrorCode::kInvalidArgument, "too many mixtures");
  double pi[kMaxMixtures], mu[kMaxMixtures], sigma[kMaxMixtures];
  for (int k = 0; k < K; ++k) {
    const size_t i = params.Index(channel, k, pos);
    pi[k] = params.pi[i];
    mu[k] = params.mu[i];
    sigma[k] = params.sigma[i];
  }
  MixturePmf({pi, size_t(K)}, {mu, size_t(K)}, {sigma, size_t(K)}, spec, pmf);
}

std::vector<double> PmfLatent(const MixtureParamsLatent& params,
                              const LogisticBinSpec& spec) {
  const size_t plane = params.plane();
  const size_t n = spec.num_bins;
  std::vector<double> out(params.channels * plane * n);
  for (int c = 0; c < params.channels; ++c) {
    for (size_t pos = 0; pos < plane; ++pos) {
      PmfLatentAt(params, spec, c, pos,
                  std::span<double>(out).subspan((c * plane + pos) * n, n));
    }
  }
  return out;
}

double NllBits(std::span<const double> pmfs, int alphabet,
               std::span<const int32_t> symbols) {
  if (pmfs.size() != symbols.size() * alphabet) {
    throw Error(ErrorCode::kShapeMismatch, "PMF and symbol counts differ");
  }
  double bits = 0.0;
  for (size_t t = 0; t < symbols.size(); ++t) {
    const double p = pmfs[t * alphabet + symbols[t]];
    bits -= std::log2(std::max(p, kNllFloor));
  }
  return bits;
}

int SampleFromPmf(std::span<const double> pmf, double u) {
  double total = 0.0;
  for (double p : pmf) total += p;
  const double target = u * total;
  double acc = 0.0;
  for (size_t j = 0; j < pmf.size(); ++j) {
    acc += pmf[j];
    if (target < acc) return static_cast<int>(j);
  }
  // u * total rounded up to the full mass; return the last bin with mass.
  for (size_t j = pmf.size(); j-- > 0;) {
    if (pmf[j] > 0.0) return static_cast<int>(j);
  }
  return static_cast<int>(pmf.size()) - 1;
}

SymbolGrid SampleLatent(const MixtureParamsLatent& params,
                        const LogisticBinSpec& spec, std::mt19937_64& rng) {
  SymbolGrid g{params.channels, params.height, params.width, spec.num_bins, {}};
  g.values.resize(params.channels * params.plane());
  std::vector<double> pmf(spec.num_bins);
  for (int c = 0; c < params.channels; ++c) {
    for (size_t pos = 0; pos < params.plane(); ++pos) {
      PmfLatentAt(params, spec, c, pos, pmf);
      g.values[c * params.plane() + pos] = SampleFromPmf(pmf, UniformUnit(rng));
    }
  }
  return g;
}

SymbolGrid SampleRgb(const MixtureParamsRgb& params, std::mt19937_64& rng,
                     bool use_lambda) {
  const size_t plane = params.plane();
  SymbolGrid g{3, params.height, params.width, kRgbAlphabet, {}};
  g.values.resize(3 * plane);
  std::vector<double> pmf(kRgbAlphabet);
  std::vector<double> x1;
  std::vector<double> x2;
  for (int c = 0; c < 3; ++c) {
    for (size_t pos = 0; pos < plane; ++pos) {
      PmfRgbAt(params, c, pos, x1, x2, pmf, use_lambda);
      g.values[c * plane + pos] = SampleFromPmf(pmf, UniformUnit(rng));
    }
    if (c == 0) x1 = CenteredChannel(g, 0);
    if (c == 1) x2 = CenteredChannel(g, 1);
  }
  return g;
}

}  // namespace l3c
