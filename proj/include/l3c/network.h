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

#ifndef L3C_NETWORK_H_
#define L3C_NETWORK_H_

// Feature extractors E^(s) and predictors D^(s) built from the kernels in
// nn_kernels.h.
//
//   E^(s): 3x3 stride-2 "down" conv -> residual blocks -> 1x1 "proj" to C.
//          E^(1) sees the image scaled to [-1, 1]; E^(s>1) sees the trunk
//          features (C_f channels) of E^(s-1).
//   D^(s): 1x1 "expand" of z^(s) to C_f -> + f^(s+1) -> residual blocks ->
//          atrous 3x3 convs with dilation 1, 2, 4 (concatenated) -> 1x1
//          "reduce" to 4 C_f -> pixel shuffle x2 = f^(s).
//          A 1x1 "head" on f^(s) emits the mixture parameters of scale s-1.

#include <memory>
#include <string>
#include <vector>

#include "l3c/nn_kernels.h"
#include "l3c/tensor.h"
#include "l3c/weights.h"

namespace l3c {

struct ExtractorOutput {
  Tensor features;  // C_f x H/2 x W/2, input to the next extractor
  Tensor latent;    // C x H/2 x W/2, before quantization
};

class Network {
 public:
  // Validates the weights and keeps them alive for the network's lifetime.
  explicit Network(std::shared_ptr<const ModelWeights> weights);

  const NetworkSpec& spec() const { return weights_->spec; }
  const ModelWeights& weights() const { return *weights_; }

  // Throws Error(kShapeMismatch) for odd spatial dimensions.
  ExtractorOutput RunExtractor(int scale, const Tensor& input) const;

  // f^(s) from z^(s) (as predictor input values) and f^(s+1). Pass nullptr
  // for f^(S+1) = 0.
  Tensor RunPredictor(int scale, const Tensor& z, const Tensor* f_next) const;

  // Mixture parameter tensor of scale s-1, computed from f^(s).
  Tensor RunHead(int scale, const Tensor& features) const;

 private:
  struct ResBlock {
    ConvLayer conv1;
    ConvLayer conv2;
  };
  struct Extractor {
    ConvLayer down;
    std::vector<ResBlock> res;
    ConvLayer proj;
  };
  struct Predictor {
    ConvLayer expand;
    std::vector<ResBlock> res;
    ConvLayer atrous[3];
    ConvLayer reduce;
    ConvLayer head;
  };

  ConvLayer Layer(const std::string& name, ConvGeometry geometry) const;
  std::vector<ResBlock> ResBlocks(const std::string& prefix) const;
  const Predictor& PredictorFor(int scale) const;

  std::shared_ptr<const ModelWeights> weights_;
  std::vector<Extractor> extractors_;  // index s - 1
  std::vector<Predictor> predictors_;  // index PredictorIndex(s) - 1
};

}  // namespace l3c

#endif  // L3C_NETWORK_H_
