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

#include "l3c/network.h"

#include <string>

#include "l3c/error.h"

namespace l3c {
namespace {

constexpr ConvGeometry kSame3x3{1, 1, 1};
constexpr ConvGeometry kPointwise{1, 1, 0};
constexpr ConvGeometry kDown{2, 1, 1};

void CheckScale(int scale, const NetworkSpec& spec) {
  if (scale < 1 || scale > spec.scales) {
    throw Error(ErrorCode::kInvalidArgument,
                "scale " + std::to_string(scale) + " outside [1, " +
                    std::to_string(spec.scales) + "]");
  }
}

}  // namespace

Network::Network(std::shared_ptr<const ModelWeights> weights)
    : weights_(std::move(weights)) {
  ValidateWeights(*weights_);
  const NetworkSpec& spec = weights_->spec;
  if (spec.HasExtractors()) {
    for (int s = 1; s <= spec.scales; ++s) {
      const std::string p = "enc" + std::to_string(s);
      extractors_.push_back(
          {Layer(p + ".down", kDown), ResBlocks(p), Layer(p + ".proj", kPointwise)});
    }
  }
  for (int d = 1; d <= spec.NumPredictors(); ++d) {
    const std::string p = "dec" + std::to_string(d);
    Predictor pred;
    pred.expand = Layer(p + ".expand", kPointwise);
    pred.res = ResBlocks(p);
    const int rates[3] = {1, 2, 4};
    for (int i = 0; i < 3; ++i) {
      pred.atrous[i] = Layer(p + ".atrous" + std::to_string(rates[i]),
                             {1, rates[i], rates[i]});
    }
    pred.reduce = Layer(p + ".reduce", kPointwise);
    pred.head = Layer(p + ".head", kPointwise);
    predictors_.push_back(std::move(pred));
  }
}

ConvLayer Network::Layer(const std::string& name, ConvGeometry geometry) const {
  return {&weights_->Get(name + ".weight"), &weights_->Get(name + ".bias"),
          geometry};
}

std::vector<Network::ResBlock> Network::ResBlocks(const std::string& prefix) const {
  std::vector<ResBlock> blocks;
  for (int i = 0; i < spec().resblocks; ++i) {
    const std::string p = prefix + ".res" + std::to_string(i);
    blocks.push_back({Layer(p + ".conv1", kSame3x3), Layer(p + ".conv2", kSame3x3)});
  }
  return blocks;
}

const Network::Predictor& Network::PredictorFor(int scale) const {
  CheckScale(scale, spec());
  return predictors_[spec().PredictorIndex(scale) - 1];
}

ExtractorOutput Network::RunExtractor(int scale, const Tensor& input) const {
  CheckScale(scale, spec());
  if (!spec().HasExtractors()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(ModelKindName(spec().kind)) + " model has no extractors");
  }
  if (input.height() % 2 != 0 || input.width() % 2 != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "extractor input must have even dimensions, got " +
                    input.ShapeString());
  }
  const Extractor& e = extractors_[scale - 1];
  ExtractorOutput out;
  out.features = Conv2d(input, e.down);
  for (const ResBlock& r : e.res) {
    out.features = ResidualBlock(out.features, r.conv1, r.conv2);
  }
  out.latent = Conv2d(out.features, e.proj);
  return out;
}

Tensor Network::RunPredictor(int scale, const Tensor& z, const Tensor* f_next) const {
  const Predictor& d = PredictorFor(scale);
  Tensor t = Conv2d(z, d.expand);
  if (f_next != nullptr) {
    if (!f_next->SameShape(t)) {
      throw Error(ErrorCode::kShapeMismatch,
                  "f^(s+1) " + f_next->ShapeString() + " does not match " +
                      t.ShapeString());
    }
    AddInPlace(t, *f_next);
  }
  for (const ResBlock& r : d.res) t = ResidualBlock(t, r.conv1, r.conv2);
  t = AtrousParallel(t, d.atrous);
  t = Conv2d(t, d.reduce);
  return PixelShuffle(t, 2);
}

Tensor Network::RunHead(int scale, const Tensor& features) const {
  return Conv2d(features, PredictorFor(scale).head);
}

}  // namespace l3c
