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

#ifndef L3C_REFERENCE_KERNELS_H_
#define L3C_REFERENCE_KERNELS_H_

// Straightforward serial kernels kept as the oracle for the parallel versions
// and as the baseline in the kernel benchmarks. Not used on the codec path.

#include "l3c/nn_kernels.h"
#include "l3c/tensor.h"

namespace l3c::reference {

// One output element at a time: bias + sum over (in, ky, kx).
Tensor Conv2d(const Tensor& input, const WeightTensor& kernel,
              const WeightTensor& bias, const ConvGeometry& geometry);

Tensor PixelShuffle(const Tensor& input, int factor);

Tensor ResidualBlock(const Tensor& input, const ConvLayer& conv1,
                     const ConvLayer& conv2);

}  // namespace l3c::reference

#endif  // L3C_REFERENCE_KERNELS_H_
