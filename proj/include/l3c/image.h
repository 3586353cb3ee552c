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

#ifndef L3C_IMAGE_H_
#define L3C_IMAGE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "l3c/dlm.h"
#include "l3c/tensor.h"

namespace l3c {

// 8-bit RGB image, interleaved row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;

  Image() = default;
  Image(int w, int h, uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<size_t>(w) * h * 3, fill) {}

  size_t num_subpixels() const { return pixels.size(); }
  uint8_t& at(int x, int y, int c) { return pixels[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<size_t>(y) * width + x) * 3 + c];
  }
  bool operator==(const Image&) const = default;
};

// Planar symbols [3][H][W] over 256 values.
SymbolGrid ImageToSymbols(const Image& image);
Image SymbolsToImage(const SymbolGrid& grid);

// [3][H][W] float tensor with values x / 127.5 - 1.
Tensor NormalizedImageTensor(const SymbolGrid& rgb);

// Replicates the last column/row until the dimensions are multiples of
// `multiple`.
Image PadToMultiple(const Image& image, int multiple);
Image Crop(const Image& image, int x0, int y0, int width, int height);
// Largest centered crop no bigger than width x height.
Image CenterCrop(const Image& image, int width, int height);

// CRC-32 (zlib polynomial) of the interleaved pixel bytes.
uint32_t ImageChecksum(const Image& image);

// Binary PPM (P6, maxval 255).
std::vector<uint8_t> EncodePpm(const Image& image);
Image DecodePpm(std::span<const uint8_t> bytes);

// PNG via libpng. Grayscale and palette images are expanded to RGB, 16-bit
// samples are reduced to 8 bits and alpha is dropped.
std::vector<uint8_t> EncodePng(const Image& image);
Image DecodePng(std::span<const uint8_t> bytes);

// Picks the format from the file signature when reading and from the
// extension (".png", otherwise PPM) when writing.
Image ReadImage(const std::string& path);
void WriteImage(const std::string& path, const Image& image);

}  // namespace l3c

#endif  // L3C_IMAGE_H_
