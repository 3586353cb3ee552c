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

#include "l3c/quantizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l3c/error.h"

namespace l3c {

LevelGrid::LevelGrid(int num_levels, double sigma_q) : sigma_q_(sigma_q) {
  if (num_levels < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "level grid needs at least 2 levels, got " +
                    std::to_string(num_levels));
  }
  if (!(sigma_q > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma_q must be positive");
  }
  spacing_ = 2.0 / (num_levels - 1);
  levels_.resize(num_levels);
  for (int j = 0; j < num_levels; ++j) levels_[j] = -1.0 + j * spacing_;
  levels_.back() = 1.0;
}

QuantizedValue QuantizeHard(const LevelGrid& grid, double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::kInvalidArgument, "cannot quantize non-finite value");
  }
  const int n = grid.size();
  if (x <= grid.level(0)) return {0, grid.level(0)};
  if (x >= grid.level(n - 1)) return {n - 1, grid.level(n - 1)};
  int j = static_cast<int>(std::floor((x - grid.level(0)) / grid.spacing()));
  j = std::clamp(j, 0, n - 2);
  // The division above can land one cell off; settle by direct comparison.
  while (j > 0 && x < grid.level(j)) --j;
  while (j < n - 2 && x > grid.level(j + 1)) ++j;
  const double d_lo = std::abs(x - grid.level(j));
  const double d_hi = std::abs(grid.level(j + 1) - x);
  if (d_hi < d_lo) ++j;
  return {j, grid.level(j)};
}

double QuantizeSoft(const LevelGrid& grid, double x, double sigma_q) {
  const auto& levels = grid.levels();
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double l : levels) max_logit = std::max(max_logit, -sigma_q * std::abs(x - l));
  double num = 0.0;
  double den = 0.0;
  for (double l : levels) {
    const double w = std::exp(-sigma_q * std::abs(x - l) - max_logit);
    num += w * l;
    den += w;
  }
  return num / den;
}

}  // namespace l3c
