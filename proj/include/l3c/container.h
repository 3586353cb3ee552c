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

#ifndef L3C_CONTAINER_H_
#define L3C_CONTAINER_H_

// Compressed file layout (little-endian):
//
//   offset  size  field
//        0     4  magic "L3CI"
//        4     2  version
//        6     1  mode (0 learned, 1 rgb, 2 rgb-shared)
//        7     1  scales S
//        8     1  lowest stored scale (0 unless scales were dropped)
//        9     1  reserved, 0
//       10     4  original height
//       14     4  original width
//       18     4  padded height
//       22     4  padded width
//       26     4  CRC-32 of the original interleaved RGB bytes
//       30        sub-streams for s = S down to the lowest stored scale:
//                   u16 C, u16 H', u16 W', u32 payload bytes, payload
//
// Each payload is one range-coder stream holding the channels of z^(s) in
// order, each channel in raster order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "l3c/weights.h"

namespace l3c {

inline constexpr uint16_t kContainerVersion = 1;
inline constexpr size_t kContainerHeaderBytes = 30;
inline constexpr size_t kSubStreamHeaderBytes = 10;

struct SubStream {
  int scale = 0;
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<uint8_t> payload;

  size_t SerializedBytes() const { return kSubStreamHeaderBytes + payload.size(); }
};

struct Container {
  uint16_t version = kContainerVersion;
  ModelKind mode = ModelKind::kLearned;
  int scales = 0;
  int lowest_stored_scale = 0;
  uint32_t original_height = 0;
  uint32_t original_width = 0;
  uint32_t padded_height = 0;
  uint32_t padded_width = 0;
  uint32_t checksum = 0;
  std::vector<SubStream> streams;  // scale S first

  // Sub-stream of `scale`, or nullptr when not stored.
  const SubStream* Find(int scale) const;
  size_t SerializedBytes() const;
  size_t PayloadBytes() const;
};

std::vector<uint8_t> SerializeContainer(const Container& c);

// Checks magic, version, header fields and that every dimension triplet
// matches the padded size; throws Error with kBadMagic, kVersionMismatch,
// kTruncated or kCorruptStream.
Container ParseContainer(std::span<const uint8_t> bytes);

// Removes the sub-streams of scales below `k` (for sampling).
Container DropScalesBelow(const Container& c, int k);

// Human-readable dump of the header and sub-stream table.
std::string DescribeContainer(const Container& c);

}  // namespace l3c

#endif  // L3C_CONTAINER_H_
