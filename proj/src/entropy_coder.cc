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

#include "l3c/entropy_coder.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "l3c/error.h"

namespace l3c {
namespace {

constexpr int kWindowBits = 56;
constexpr uint64_t kWindowTop = uint64_t{1} << kWindowBits;
constexpr uint64_t kRenormThreshold = uint64_t{1} << (kWindowBits - 8);
constexpr uint64_t kWindowMask = kWindowTop - 1;
constexpr uint64_t kBelowTopByteMask = kRenormThreshold - 1;
constexpr int kWindowBytes = kWindowBits / 8;
// A valid stream is over-read by at most kWindowBytes - 1 bytes.
constexpr size_t kMaxOverrun = 8;
constexpr int kMaxPrecisionBits = 24;

void CheckPrecision(int precision_bits) {
  if (precision_bits < 1 || precision_bits > kMaxPrecisionBits) {
    throw Error(ErrorCode::kInvalidArgument,
                "CDF precision must be in [1, 24] bits, got " +
                    std::to_string(precision_bits));
  }
}

}  // namespace

IntegerCdf::IntegerCdf(std::vector<uint32_t> cumulative, int precision_bits)
    : cum_(std::move(cumulative)), precision_bits_(precision_bits) {
  CheckPrecision(precision_bits);
  if (cum_.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "CDF needs at least one symbol");
  }
  if (cum_.front() != 0 || cum_.back() != (uint32_t{1} << precision_bits)) {
    throw Error(ErrorCode::kInvalidArgument, "CDF must span [0, 2^P]");
  }
  for (size_t i = 1; i < cum_.size(); ++i) {
    if (cum_[i] <= cum_[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "CDF not strictly increasing at symbol " +
                      std::to_string(i - 1));
    }
  }
}

IntegerCdf IntegerCdf::Uniform(int alphabet_size, int precision_bits) {
  if (alphabet_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "empty alphabet");
  }
  std::vector<double> pmf(alphabet_size, 1.0 / alphabet_size);
  return QuantizePmf(pmf, precision_bits);
}

void QuantizePmfInto(std::span<const double> pmf, int precision_bits,
                     std::span<uint32_t> cumulative,
                     PmfQuantizeScratch& scratch) {
  CheckPrecision(precision_bits);
  const size_t n = pmf.size();
  const uint64_t total = uint64_t{1} << precision_bits;
  if (n == 0 || n > total - n) {
    throw Error(ErrorCode::kInvalidArgument,
                "alphabet of " + std::to_string(n) +
                    " symbols does not fit " + std::to_string(precision_bits) +
                    "-bit precision");
  }
  if (cumulative.size() != n + 1) {
    throw Error(ErrorCode::kShapeMismatch, "cumulative table size");
  }
  double sum = 0.0;
  for (double p : pmf) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "PMF entries must be finite and non-negative");
    }
    sum += p;
  }
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "PMF has zero total mass");
  }

  const uint64_t budget = total - n;
  const double scale = static_cast<double>(budget) / sum;
  // Fractional parts as bit patterns: remainders are non-negative, so the
  // patterns order like the values.
  auto& keys = scratch.keys;
  keys.resize(n);
  uint64_t assigned = 0;
  // cumulative[i + 1] temporarily holds the count of symbol i.
  for (size_t i = 0; i < n; ++i) {
    const double share = pmf[i] * scale;
    uint64_t c = static_cast<uint64_t>(share);  // floor, share >= 0
    keys[i] = std::bit_cast<uint64_t>(share - static_cast<double>(c));
    if (c > budget) c = budget;
    cumulative[i + 1] = static_cast<uint32_t>(c);
    assigned += c;
  }
  // Rounding noise can only push `assigned` over budget by a few counts in
  // pathological inputs; take them back from the largest bins.
  while (assigned > budget) {
    auto it = std::max_element(cumulative.begin() + 1, cumulative.end());
    --*it;
    --assigned;
  }
  uint64_t leftover = budget - assigned;
  if (leftover >= n) {
    // Only reachable through rounding noise: spread whole rounds evenly.
    for (size_t i = 0; i < n; ++i) cumulative[i + 1] += static_cast<uint32_t>(leftover / n);
    leftover %= n;
  }
  if (leftover > 0) {
    // Find the leftover-th largest remainder, then break ties by index.
    auto& sorted = scratch.sorted;
    sorted.assign(keys.begin(), keys.end());
    std::nth_element(sorted.begin(), sorted.begin() + (leftover - 1), sorted.end(),
                     std::greater<uint64_t>());
    const uint64_t threshold = sorted[leftover - 1];
    uint64_t above = 0;
    for (uint64_t k : keys) above += k > threshold;
    uint64_t ties = leftover - above;
    for (size_t i = 0; i < n; ++i) {
      if (keys[i] > threshold) {
        ++cumulative[i + 1];
      } else if (keys[i] == threshold && ties > 0) {
        ++cumulative[i + 1];
        --ties;
      }
    }
  }
  cumulative[0] = 0;
  for (size_t i = 0; i < n; ++i) {
    cumulative[i + 1] += cumulative[i] + 1;
  }
}

IntegerCdf QuantizePmf(std::span<const double> pmf, int precision_bits) {
  std::vector<uint32_t> cum(pmf.size() + 1);
  PmfQuantizeScratch scratch;
  QuantizePmfInto(pmf, precision_bits, cum, scratch);
  return IntegerCdf(std::move(cum), precision_bits);
}

double CdfSymbolBits(std::span<const uint32_t> cumulative, int symbol,
                     int precision_bits) {
  const double count = cumulative[symbol + 1] - cumulative[symbol];
  return precision_bits - std::log2(count);
}

void RangeEncoder::Encode(const IntegerCdf& cdf, int symbol) {
  Encode(cdf.cumulative(), symbol, cdf.precision_bits());
}

void RangeEncoder::Encode(std::span<const uint32_t> cumulative, int symbol,
                          int precision_bits) {
  if (symbol < 0 || static_cast<size_t>(symbol) + 1 >= cumulative.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "symbol " + std::to_string(symbol) + " outside alphabet");
  }
  EncodeInterval(cumulative[symbol],
                 cumulative[symbol + 1] - cumulative[symbol], precision_bits);
}

void RangeEncoder::EncodeInterval(uint32_t lower, uint32_t count,
                                  int precision_bits) {
  if (finished_) throw std::logic_error("RangeEncoder already finished");
  const uint64_t r = range_ >> precision_bits;
  low_ += r * lower;
  if ((uint64_t{lower} + count) == (uint64_t{1} << precision_bits)) {
    // The top symbol absorbs the truncation slack of r.
    range_ -= r * lower;
  } else {
    range_ = r * count;
  }
  while (range_ < kRenormThreshold) {
    range_ <<= 8;
    ShiftLow();
  }
}

void RangeEncoder::EmitByte(uint8_t b) {
  if (leading_byte_) {
    // The first cache byte precedes the window and is always zero.
    leading_byte_ = false;
    return;
  }
  out_.push_back(b);
}

void RangeEncoder::ShiftLow() {
  if ((low_ & kWindowMask) < (uint64_t{0xFF} << (kWindowBits - 8)) ||
      low_ >= kWindowTop) {
    const uint8_t carry = static_cast<uint8_t>(low_ >> kWindowBits);
    uint8_t pending = cache_;
    do {
      EmitByte(static_cast<uint8_t>(pending + carry));
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<uint8_t>((low_ >> (kWindowBits - 8)) & 0xFF);
  }
  ++cache_size_;
  low_ = (low_ & kBelowTopByteMask) << 8;
}

Bitstream RangeEncoder::Finish() {
  if (finished_) throw std::logic_error("RangeEncoder::Finish called twice");
  finished_ = true;
  // Any value in [low, low + range) identifies the stream; pick the one with
  // the most trailing zero bits so that only the top window byte is needed.
  low_ = (low_ + kBelowTopByteMask) & ~kBelowTopByteMask;
  ShiftLow();
  ShiftLow();
  Bitstream bs;
  bs.bytes = std::move(out_);
  out_.clear();
  return bs;
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> data) : data_(data) {
  for (int i = 0; i < kWindowBytes; ++i) code_ = (code_ << 8) | NextByte();
}

uint8_t RangeDecoder::NextByte() {
  if (pos_ < data_.size()) return data_[pos_++];
  if (++overrun_ > kMaxOverrun) {
    throw Error(ErrorCode::kTruncated, "bitstream exhausted");
  }
  return 0;
}

void RangeDecoder::Normalize() {
  while (range_ < kRenormThreshold) {
    code_ = (code_ << 8) | NextByte();
    range_ <<= 8;
  }
}

int RangeDecoder::Decode(const IntegerCdf& cdf) {
  return Decode(cdf.cumulative(), cdf.precision_bits());
}

int RangeDecoder::Decode(std::span<const uint32_t> cumulative,
                         int precision_bits) {
  const size_t n = cumulative.size() - 1;
  const uint64_t total = uint64_t{1} << precision_bits;
  const uint64_t r = range_ >> precision_bits;
  uint64_t target = code_ / r;
  if (target >= total) target = total - 1;
  // First entry strictly greater than target, minus one.
  const auto it = std::upper_bound(cumulative.begin() + 1, cumulative.end(),
                                   static_cast<uint32_t>(target));
  const size_t symbol =
      std::min<size_t>(static_cast<size_t>(it - cumulative.begin()) - 1, n - 1);
  const uint64_t lower = cumulative[symbol];
  code_ -= r * lower;
  if (symbol == n - 1) {
    range_ -= r * lower;
  } else {
    range_ = r * (cumulative[symbol + 1] - lower);
  }
  Normalize();
  return static_cast<int>(symbol);
}

}  // namespace l3c
