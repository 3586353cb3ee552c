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

#ifndef L3C_QUANTIZER_H_
#define L3C_QUANTIZER_H_

#include <vector>

namespace l3c {

inline constexpr int kDefaultLevels = 25;
inline constexpr double kDefaultSigmaQ = 2.0;

// Evenly spaced scalar quantization levels over [-1, 1].
class LevelGrid {
 public:
  explicit LevelGrid(int num_levels = kDefaultLevels,
                     double sigma_q = kDefaultSigmaQ);

  int size() const { return static_cast<int>(levels_.size()); }
  double level(int index) const { return levels_[index]; }
  const std::vector<double>& levels() const { return levels_; }
  double spacing() const { return spacing_; }
  double sigma_q() const { return sigma_q_; }

 private:
  std::vector<double> levels_;
  double spacing_;
  double sigma_q_;
};

struct QuantizedValue {
  int index;
  double value;
};

// Nearest level; inputs outside the grid saturate to the end levels and exact
// midpoints resolve to the lower index. Throws on non-finite input.
QuantizedValue QuantizeHard(const LevelGrid& grid, double x);

// Softmax-weighted level average with weights exp(-sigma_q * |x - level|).
double QuantizeSoft(const LevelGrid& grid, double x, double sigma_q);
inline double QuantizeSoft(const LevelGrid& grid, double x) {
  return QuantizeSoft(grid, x, grid.sigma_q());
}

}  // namespace l3c

#endif  // L3C_QUANTIZER_H_
