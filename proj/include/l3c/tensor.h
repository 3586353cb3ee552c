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

#ifndef L3C_TENSOR_H_
#define L3C_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace l3c {

// Dense float32 activation map, row-major [channels][height][width].
class Tensor {
 public:
  Tensor() = default;
  Tensor(int channels, int height, int width, float fill = 0.0f);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  size_t plane() const { return static_cast<size_t>(height_) * width_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  std::span<float> values() { return data_; }
  std::span<const float> values() const { return data_; }

  std::span<float> Channel(int c) { return {data_.data() + c * plane(), plane()}; }
  std::span<const float> Channel(int c) const {
    return {data_.data() + c * plane(), plane()};
  }

  float& at(int c, int y, int x) { return data_[(c * plane()) + y * width_ + x]; }
  float at(int c, int y, int x) const {
    return data_[(c * plane()) + y * width_ + x];
  }

  bool SameShape(const Tensor& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }
  std::string ShapeString() const;

 private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

// Parameter tensor of arbitrary rank (conv kernels are [out][in][kh][kw]).
struct WeightTensor {
  std::vector<int> dims;
  std::vector<float> data;

  size_t NumElements() const;
  int dim(int i) const { return dims[i]; }
};

std::string DimsString(std::span<const int> dims);

}  // namespace l3c

#endif  // L3C_TENSOR_H_
