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

#ifndef L3C_ENTROPY_CODER_H_
#define L3C_ENTROPY_CODER_H_

// Byte-oriented range coder driven by integer CDFs.
//
// The coder keeps a 56-bit interval window inside 64-bit registers. Every
// symbol divides the current range by 2^P and scales it by the symbol's
// count, and whole bytes are shifted out once the range drops below 2^48.
// Carries into already emitted bytes are resolved with the usual
// cache/pending-0xFF scheme. All arithmetic is on unsigned integers, so the
// output is identical on every platform.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace l3c {

inline constexpr int kCdfPrecisionBits = 16;

// Monotone cumulative count table: cumulative()[0] == 0,
// cumulative()[n] == 2^P, and every symbol has count >= 1.
class IntegerCdf {
 public:
  // Throws Error(kInvalidArgument) if the table violates the invariants.
  explicit IntegerCdf(std::vector<uint32_t> cumulative,
                      int precision_bits = kCdfPrecisionBits);

  static IntegerCdf Uniform(int alphabet_size,
                            int precision_bits = kCdfPrecisionBits);

  int alphabet_size() const { return static_cast<int>(cum_.size()) - 1; }
  int precision_bits() const { return precision_bits_; }
  uint32_t total() const { return cum_.back(); }
  uint32_t lower(int symbol) const { return cum_[symbol]; }
  uint32_t upper(int symbol) const { return cum_[symbol + 1]; }
  uint32_t count(int symbol) const { return cum_[symbol + 1] - cum_[symbol]; }
  std::span<const uint32_t> cumulative() const { return cum_; }

 private:
  std::vector<uint32_t> cum_;
  int precision_bits_;
};

// Scratch space reused across QuantizePmfInto calls on one thread.
struct PmfQuantizeScratch {
  std::vector<uint64_t> keys;
  std::vector<uint64_t> sorted;
};

// Converts a real-valued PMF into integer counts totalling exactly
// 2^precision_bits. Every symbol first receives one count; the remaining
// 2^P - n counts are split proportionally by largest-remainder rounding,
// with ties going to the lower symbol index.
//
// Throws Error(kInvalidArgument) for negative or non-finite entries, a zero
// total, or an alphabet larger than 2^(P-1).
IntegerCdf QuantizePmf(std::span<const double> pmf,
                       int precision_bits = kCdfPrecisionBits);

// Allocation-free variant writing pmf.size() + 1 cumulative entries.
void QuantizePmfInto(std::span<const double> pmf, int precision_bits,
                     std::span<uint32_t> cumulative,
                     PmfQuantizeScratch& scratch);

// Ideal code length of `symbol` under `cdf`, in bits.
double CdfSymbolBits(std::span<const uint32_t> cumulative, int symbol,
                     int precision_bits = kCdfPrecisionBits);

struct Bitstream {
  std::vector<uint8_t> bytes;
  size_t bit_length() const { return bytes.size() * 8; }
};

class RangeEncoder {
 public:
  RangeEncoder() = default;

  void Encode(const IntegerCdf& cdf, int symbol);
  // Table form: `cumulative` has alphabet + 1 entries.
  void Encode(std::span<const uint32_t> cumulative, int symbol,
              int precision_bits = kCdfPrecisionBits);
  // Encodes the sub-interval [lower, lower + count) of a 2^P total.
  void EncodeInterval(uint32_t lower, uint32_t count, int precision_bits);

  // Flushes the final interval; the encoder cannot be used afterwards.
  // Throws std::logic_error when called twice.
  Bitstream Finish();

  size_t bytes_written() const { return out_.size(); }

 private:
  void ShiftLow();
  void EmitByte(uint8_t b);

  uint64_t low_ = 0;
  uint64_t range_ = uint64_t{1} << 56;
  uint8_t cache_ = 0;
  uint64_t cache_size_ = 1;
  bool leading_byte_ = true;
  bool finished_ = false;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> data);

  int Decode(const IntegerCdf& cdf);
  int Decode(std::span<const uint32_t> cumulative,
             int precision_bits = kCdfPrecisionBits);

  // Bytes consumed so far, excluding implicit zero padding.
  size_t position() const { return pos_; }

 private:
  uint8_t NextByte();
  void Normalize();

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  size_t overrun_ = 0;
  uint64_t code_ = 0;
  uint64_t range_ = uint64_t{1} << 56;
};

}  // namespace l3c

#endif  // L3C_ENTROPY_CODER_H_
