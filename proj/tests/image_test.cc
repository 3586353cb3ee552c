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

#include "l3c/image.h"

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "l3c/error.h"
#include "test_util.h"

namespace l3c {
namespace {

// Bitwise reflected CRC-32 (polynomial 0xEDB88320).
uint32_t OracleCrc32(const std::vector<uint8_t>& data) {
  uint32_t crc = 0xFFFFFFFFu;
  for (uint8_t b : data) {
    crc ^= b;
    for (int k = 0; k < 8; ++k) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
  }
  return ~crc;
}

TEST(ImageChecksumTest, MatchesBitwiseCrc) {
  Image img(3, 1);
  const std::string s = "123456789";
  std::copy(s.begin(), s.end(), img.pixels.begin());
  EXPECT_EQ(ImageChecksum(img), 0xCBF43926u);  // standard check value
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const Image r = test::RandomImage(rng, test::UniformInt(rng, 1, 30),
                                      test::UniformInt(rng, 1, 30));
    EXPECT_EQ(ImageChecksum(r), OracleCrc32(r.pixels));
  }
}

TEST(ImageTest, SymbolsRoundTrip) {
  std::mt19937_64 rng(2);
  const Image img = test::RandomImage(rng, 7, 5);
  const SymbolGrid g = ImageToSymbols(img);
  EXPECT_EQ(g.channels, 3);
  EXPECT_EQ(g.alphabet, 256);
  EXPECT_EQ(g.values[0 * g.plane() + 2 * 7 + 3], img.at(3, 2, 0));
  EXPECT_EQ(g.values[2 * g.plane() + 4 * 7 + 6], img.at(6, 4, 2));
  EXPECT_EQ(SymbolsToImage(g), img);
  const Tensor t = NormalizedImageTensor(g);
  EXPECT_FLOAT_EQ(t.at(1, 1, 1), static_cast<float>(img.at(1, 1, 1) / 127.5 - 1.0));
}

TEST(ImageTest, NormalizedRange) {
  Image img(2, 1);
  img.at(0, 0, 0) = 0;
  img.at(1, 0, 0) = 255;
  const Tensor t = NormalizedImageTensor(ImageToSymbols(img));
  EXPECT_EQ(t.at(0, 0, 0), -1.0f);
  EXPECT_EQ(t.at(0, 0, 1), 1.0f);
}

TEST(ImageTest, PadReplicatesEdgesAndCropInverts) {
  std::mt19937_64 rng(3);
  const Image img = test::RandomImage(rng, 13, 17);
  const Image padded = PadToMultiple(img, 8);
  EXPECT_EQ(padded.width, 16);
  EXPECT_EQ(padded.height, 24);
  EXPECT_EQ(padded.at(15, 3, 1), img.at(12, 3, 1));
  EXPECT_EQ(padded.at(2, 23, 2), img.at(2, 16, 2));
  EXPECT_EQ(padded.at(15, 23, 0), img.at(12, 16, 0));
  EXPECT_EQ(Crop(padded, 0, 0, 13, 17), img);
  EXPECT_EQ(PadToMultiple(padded, 8), padded);
  EXPECT_THROW(Crop(img, 1, 0, 13, 17), Error);
}

TEST(ImageTest, CenterCrop) {
  std::mt19937_64 rng(4);
  const Image img = test::RandomImage(rng, 10, 6);
  const Image c = CenterCrop(img, 4, 4);
  EXPECT_EQ(c.width, 4);
  EXPECT_EQ(c.at(0, 0, 0), img.at(3, 1, 0));
  EXPECT_EQ(CenterCrop(img, 100, 100), img);
}

TEST(ImageTest, PpmRoundTripAndHeaderComments) {
  std::mt19937_64 rng(5);
  const Image img = test::RandomImage(rng, 11, 4);
  EXPECT_EQ(DecodePpm(EncodePpm(img)), img);
  const std::string text = "P6\n# comment\n2 1\n255\n";
  std::vector<uint8_t> bytes(text.begin(), text.end());
  for (uint8_t v : {1, 2, 3, 4, 5, 6}) bytes.push_back(v);
  const Image d = DecodePpm(bytes);
  EXPECT_EQ(d.width, 2);
  EXPECT_EQ(d.at(1, 0, 2), 6);
  bytes.pop_back();
  EXPECT_THROW(DecodePpm(bytes), Error);
  const std::string p3 = "P3\n1 1\n255\n0 0 0\n";
  EXPECT_THROW(DecodePpm(std::vector<uint8_t>(p3.begin(), p3.end())), Error);
}

TEST(ImageTest, PngRoundTripAndGarbage) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 5; ++i) {
    const Image img = test::RandomImage(rng, test::UniformInt(rng, 1, 40),
                                        test::UniformInt(rng, 1, 40));
    EXPECT_EQ(DecodePng(EncodePng(img)), img);
  }
  std::vector<uint8_t> garbage = EncodePng(Image(4, 4));
  garbage.resize(garbage.size() / 2);
  EXPECT_THROW(DecodePng(garbage), Error);
}

TEST(ImageTest, FilesByExtension) {
  test::TempDir dir("image");
  std::mt19937_64 rng(7);
  const Image img = test::RandomImage(rng, 9, 9);
  WriteImage(dir.File("a.png"), img);
  WriteImage(dir.File("a.ppm"), img);
  EXPECT_EQ(ReadImage(dir.File("a.png")), img);
  EXPECT_EQ(ReadImage(dir.File("a.ppm")), img);
  EXPECT_THROW(ReadImage(dir.File("missing.png")), Error);
}

}  // namespace
}  // namespace l3c
