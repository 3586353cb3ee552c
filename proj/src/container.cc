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

#include "l3c/container.h"

#include <algorithm>
#include <sstream>

#include "l3c/byte_io.h"
#include "l3c/error.h"

namespace l3c {
namespace {

constexpr uint8_t kMagic[4] = {'L', '3', 'C', 'I'};
constexpr int kMaxScales = 8;

void Corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptStream, what);
}

}  // namespace

const SubStream* Container::Find(int scale) const {
  for (const SubStream& s : streams) {
    if (s.scale == scale) return &s;
  }
  return nullptr;
}

size_t Container::SerializedBytes() const {
  size_t n = kContainerHeaderBytes;
  for (const SubStream& s : streams) n += s.SerializedBytes();
  return n;
}

size_t Container::PayloadBytes() const {
  size_t n = 0;
  for (const SubStream& s : streams) n += s.payload.size();
  return n;
}

std::vector<uint8_t> SerializeContainer(const Container& c) {
  std::vector<uint8_t> out;
  out.reserve(c.SerializedBytes());
  ByteWriter w(out);
  w.Bytes(kMagic);
  w.U16(c.version);
  w.U8(static_cast<uint8_t>(c.mode));
  w.U8(static_cast<uint8_t>(c.scales));
  w.U8(static_cast<uint8_t>(c.lowest_stored_scale));
  w.U8(0);
  w.U32(c.original_height);
  w.U32(c.original_width);
  w.U32(c.padded_height);
  w.U32(c.padded_width);
  w.U32(c.checksum);
  for (const SubStream& s : c.streams) {
    if (s.channels > 0xffff || s.height > 0xffff || s.width > 0xffff) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sub-stream dimensions exceed 16 bits at scale " +
                      std::to_string(s.scale));
    }
    w.U16(static_cast<uint16_t>(s.channels));
    w.U16(static_cast<uint16_t>(s.height));
    w.U16(static_cast<uint16_t>(s.width));
    w.U32(static_cast<uint32_t>(s.payload.size()));
    w.Bytes(s.payload);
  }
  return out;
}

Container ParseContainer(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  if (bytes.size() < 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw Error(ErrorCode::kBadMagic, "not an L3C container");
  }
  r.Bytes(4);
  Container c;
  c.version = r.U16();
  if (c.version != kContainerVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "container version " + std::to_string(c.version) +
                    ", expected " + std::to_string(kContainerVersion));
  }
  const uint8_t mode = r.U8();
  if (mode > 2) Corrupt("unknown mode " + std::to_string(mode));
  c.mode = static_cast<ModelKind>(mode);
  c.scales = r.U8();
  c.lowest_stored_scale = r.U8();
  if (r.U8() != 0) Corrupt("reserved header byte is not zero");
  c.original_height = r.U32();
  c.original_width = r.U32();
  c.padded_height = r.U32();
  c.padded_width = r.U32();
  c.checksum = r.U32();

  if (c.scales < 1 || c.scales > kMaxScales) {
    Corrupt("scale count " + std::to_string(c.scales));
  }
  if (c.lowest_stored_scale > c.scales) Corrupt("lowest stored scale beyond S");
  const uint32_t multiple = 1u << c.scales;
  if (c.original_height == 0 || c.original_width == 0 ||
      c.padded_height < c.original_height || c.padded_width < c.original_width ||
      c.padded_height % multiple != 0 || c.padded_width % multiple != 0 ||
      c.padded_height - c.original_height >= multiple ||
      c.padded_width - c.original_width >= multiple) {
    Corrupt("inconsistent image dimensions");
  }
  for (int s = c.scales; s >= c.lowest_stored_scale; --s) {
    SubStream sub;
    sub.scale = s;
    sub.channels = r.U16();
    sub.height = r.U16();
    sub.width = r.U16();
    const uint32_t len = r.U32();
    if (sub.height != static_cast<int>(c.padded_height >> s) ||
        sub.width != static_cast<int>(c.padded_width >> s)) {
      Corrupt("dimension triplet of scale " + std::to_string(s) +
              " does not match the padded size");
    }
    const bool rgb = s == 0 || c.mode != ModelKind::kLearned;
    if (sub.channels < 1 || (rgb && sub.channels != 3)) {
      Corrupt("channel count of scale " + std::to_string(s));
    }
    const auto payload = r.Bytes(len);
    sub.payload.assign(payload.begin(), payload.end());
    c.streams.push_back(std::move(sub));
  }
  if (r.remaining() != 0) Corrupt("trailing bytes after the last sub-stream");
  return c;
}

Container DropScalesBelow(const Container& c, int k) {
  if (k < c.lowest_stored_scale || k > c.scales) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot keep scales " + std::to_string(k) + ".." +
                    std::to_string(c.scales) + " of a container storing " +
                    std::to_string(c.lowest_stored_scale) + ".." +
                    std::to_string(c.scales));
  }
  Container out = c;
  out.lowest_stored_scale = k;
  std::erase_if(out.streams, [k](const SubStream& s) { return s.scale < k; });
  return out;
}

std::string DescribeContainer(const Container& c) {
  std::ostringstream os;
  os << "version " << c.version << ", mode " << ModelKindName(c.mode) << ", S="
     << c.scales << ", stored scales " << c.lowest_stored_scale << ".."
     << c.scales << "\n";
  os << "image " << c.original_width << "x" << c.original_height << " (padded "
     << c.padded_width << "x" << c.padded_height << "), crc32 0x" << std::hex
     << c.checksum << std::dec << "\n";
  os << "header " << kContainerHeaderBytes << " bytes, total "
     << c.SerializedBytes() << " bytes\n";
  for (const SubStream& s : c.streams) {
    os << "  scale " << s.scale << ": C=" << s.channels << " H'=" << s.height
       << " W'=" << s.width << " payload " << s.payload.size() << " bytes\n";
  }
  return os.str();
}

}  // namespace l3c
