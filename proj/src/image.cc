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

#include <png.h>
#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "l3c/byte_io.h"
#include "l3c/error.h"

namespace l3c {
namespace {

constexpr uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void CheckDims(int width, int height) {
  if (width <= 0 || height <= 0 || width > (1 << 24) || height > (1 << 24)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad image dimensions " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

// Reads one whitespace-separated header token, skipping '#' comments.
std::string PpmToken(std::span<const uint8_t> bytes, size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  std::string token;
  while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
    token.push_back(static_cast<char>(bytes[pos++]));
  }
  if (token.empty()) throw Error(ErrorCode::kTruncated, "PPM header");
  return token;
}

int PpmNumber(std::span<const uint8_t> bytes, size_t& pos) {
  const std::string t = PpmToken(bytes, pos);
  if (t.size() > 9 || !std::all_of(t.begin(), t.end(), ::isdigit)) {
    throw Error(ErrorCode::kCorruptStream, "PPM header field '" + t + "'");
  }
  return std::stoi(t);
}

struct PngReadState {
  std::span<const uint8_t> data;
  size_t pos = 0;
};

void PngRead(png_structp png, png_bytep out, png_size_t n) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (n > st->data.size() - st->pos) png_error(png, "truncated PNG");
  std::memcpy(out, st->data.data() + st->pos, n);
  st->pos += n;
}

void PngWrite(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::vector<uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

void PngFlush(png_structp) {}

// libpng reports errors through longjmp; the message is kept here and
// rethrown as an exception once control is back in C++ code.
thread_local char png_error_message[256];

[[noreturn]] void PngFail(png_structp png, png_const_charp msg) {
  std::snprintf(png_error_message, sizeof(png_error_message), "%s", msg);
  png_longjmp(png, 1);
}

void PngWarn(png_structp, png_const_charp) {}

bool EndsWith(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                    [](char a, char b) { return std::tolower(a) == b; });
}

}  // namespace

SymbolGrid ImageToSymbols(const Image& image) {
  SymbolGrid g{3, image.height, image.width, kRgbAlphabet, {}};
  const size_t plane = g.plane();
  g.values.resize(3 * plane);
  for (size_t i = 0; i < plane; ++i) {
    for (int c = 0; c < 3; ++c) g.values[c * plane + i] = image.pixels[i * 3 + c];
  }
  return g;
}

Image SymbolsToImage(const SymbolGrid& grid) {
  if (grid.channels != 3) {
    throw Error(ErrorCode::kShapeMismatch, "image symbols need 3 channels");
  }
  Image img(grid.width, grid.height);
  const size_t plane = grid.plane();
  for (size_t i = 0; i < plane; ++i) {
    for (int c = 0; c < 3; ++c) {
      img.pixels[i * 3 + c] = static_cast<uint8_t>(grid.values[c * plane + i]);
    }
  }
  return img;
}

Tensor NormalizedImageTensor(const SymbolGrid& rgb) {
  Tensor t(rgb.channels, rgb.height, rgb.width);
  for (size_t i = 0; i < t.size(); ++i) {
    t.data()[i] = static_cast<float>(rgb.values[i] / kRgbCenter - 1.0);
  }
  return t;
}

Image PadToMultiple(const Image& image, int multiple) {
  const int w = (image.width + multiple - 1) / multiple * multiple;
  const int h = (image.height + multiple - 1) / multiple * multiple;
  if (w == image.width && h == image.height) return image;
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = std::min(y, image.height - 1);
    for (int x = 0; x < w; ++x) {
      const int sx = std::min(x, image.width - 1);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = image.at(sx, sy, c);
    }
  }
  return out;
}

Image Crop(const Image& image, int x0, int y0, int width, int height) {
  if (x0 < 0 || y0 < 0 || width < 1 || height < 1 || x0 + width > image.width ||
      y0 + height > image.height) {
    throw Error(ErrorCode::kInvalidArgument, "crop outside the image");
  }
  Image out(width, height);
  for (int y = 0; y < height; ++y) {
    const uint8_t* src = &image.pixels[(static_cast<size_t>(y0 + y) * image.width + x0) * 3];
    std::copy(src, src + 3 * width, &out.pixels[static_cast<size_t>(y) * width * 3]);
  }
  return out;
}

Image CenterCrop(const Image& image, int width, int height) {
  const int w = std::min(width, image.width);
  const int h = std::min(height, image.height);
  return Crop(image, (image.width - w) / 2, (image.height - h) / 2, w, h);
}

uint32_t ImageChecksum(const Image& image) {
  uLong crc = crc32(0L, Z_NULL, 0);
  const uint8_t* p = image.pixels.data();
  size_t n = image.pixels.size();
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<size_t>(n, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    n -= chunk;
  }
  return static_cast<uint32_t>(crc);
}

std::vector<uint8_t> EncodePpm(const Image& image) {
  CheckDims(image.width, image.height);
  const std::string header = "P6\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

Image DecodePpm(std::span<const uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw Error(ErrorCode::kBadMagic, "not a binary PPM (P6) file");
  }
  size_t pos = 2;
  const int width = PpmNumber(bytes, pos);
  const int height = PpmNumber(bytes, pos);
  const int maxval = PpmNumber(bytes, pos);
  CheckDims(width, height);
  if (maxval != 255) {
    throw Error(ErrorCode::kInvalidArgument,
                "PPM maxval " + std::to_string(maxval) + " unsupported");
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw Error(ErrorCode::kCorruptStream, "PPM header terminator");
  }
  ++pos;
  Image img(width, height);
  if (bytes.size() - pos < img.pixels.size()) {
    throw Error(ErrorCode::kTruncated, "PPM pixel data");
  }
  std::copy_n(bytes.begin() + pos, img.pixels.size(), img.pixels.begin());
  return img;
}

std::vector<uint8_t> EncodePng(const Image& image) {
  CheckDims(image.width, image.height);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, PngFail, PngWarn);
  if (png == nullptr) throw Error(ErrorCode::kIo, "png_create_write_struct");
  png_infop info = png_create_info_struct(png);
  std::vector<uint8_t> out;
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::kIo, "png_create_info_struct");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, std::string("PNG: ") + png_error_message);
  }
  {
    png_set_write_fn(png, &out, PngWrite, PngFlush);
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y) {
      png_write_row(png, const_cast<png_bytep>(
                             &image.pixels[static_cast<size_t>(y) * image.width * 3]));
    }
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

Image DecodePng(std::span<const uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a PNG file");
  }
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, PngFail, PngWarn);
  if (png == nullptr) throw Error(ErrorCode::kIo, "png_create_read_struct");
  png_infop info = png_create_info_struct(png);
  PngReadState state{bytes, 0};
  Image img;
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::kIo, "png_create_info_struct");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kCorruptStream, std::string("PNG: ") + png_error_message);
  }
  bool bad_layout = false;
  int width = 0;
  int height = 0;
  {
    png_set_read_fn(png, &state, PngRead);
    png_read_info(png, info);
    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    const int color = png_get_color_type(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(png);
    }
    const int passes = png_set_interlace_handling(png);
    png_read_update_info(png, info);
    bad_layout = width <= 0 || height <= 0 || width > (1 << 24) ||
                 height > (1 << 24) ||
                 png_get_rowbytes(png, info) != static_cast<size_t>(width) * 3;
    if (!bad_layout) {
      img = Image(width, height);
      for (int p = 0; p < passes; ++p) {
        for (int y = 0; y < height; ++y) {
          png_read_row(png, &img.pixels[static_cast<size_t>(y) * width * 3], nullptr);
        }
      }
      png_read_end(png, nullptr);
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (bad_layout) {
    throw Error(ErrorCode::kCorruptStream,
                "unsupported PNG layout " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  return img;
}

Image ReadImage(const std::string& path) {
  const std::vector<uint8_t> bytes = ReadFileBytes(path);
  if (bytes.size() >= 8 && std::equal(kPngSignature, kPngSignature + 8, bytes.begin())) {
    return DecodePng(bytes);
  }
  return DecodePpm(bytes);
}

void WriteImage(const std::string& path, const Image& image) {
  WriteFileBytes(path, EndsWith(path, ".png") ? EncodePng(image) : EncodePpm(image));
}

std::vector<uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed: " + path);
  return bytes;
}

void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace l3c
