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

#include "l3c/nn_kernels.h"

#include <gtest/gtest.h>

#include <omp.h>

#include <algorithm>
#include <random>

#include "l3c/error.h"
#include "l3c/reference_kernels.h"
#include "oracles.h"
#include "test_util.h"

namespace l3c {
namespace {

using test::OracleConv;
using test::RandomTensor;
using test::RandomWeight;
using test::UniformInt;

void ExpectNear(const Tensor& a, const Tensor& b, double tol) {
  ASSERT_TRUE(a.SameShape(b)) << a.ShapeString() << " vs " << b.ShapeString();
  for (size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a.data()[i], b.data()[i], tol) << i;
}

void ExpectIdentical(const Tensor& a, const Tensor& b) {
  ASSERT_TRUE(a.SameShape(b));
  EXPECT_TRUE(std::equal(a.data(), a.data() + a.size(), b.data()));
}

TEST(Conv2dTest, IdentityKernel) {
  std::mt19937_64 rng(1);
  const Tensor in = RandomTensor(rng, 3, 4, 5);
  WeightTensor k{{3, 3, 1, 1}, std::vector<float>(9, 0.0f)};
  for (int c = 0; c < 3; ++c) k.data[c * 3 + c] = 1.0f;
  const WeightTensor b{{3}, {0, 0, 0}};
  ExpectIdentical(Conv2d(in, k, b, {1, 1, 0}), in);
}

TEST(Conv2dTest, ZeroKernelGivesBias) {
  std::mt19937_64 rng(2);
  const Tensor in = RandomTensor(rng, 2, 5, 5);
  const WeightTensor k{{2, 2, 3, 3}, std::vector<float>(36, 0.0f)};
  const WeightTensor b{{2}, {1.5f, -2.0f}};
  const Tensor out = Conv2d(in, k, b, {1, 1, 1});
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      EXPECT_EQ(out.at(0, y, x), 1.5f);
      EXPECT_EQ(out.at(1, y, x), -2.0f);
    }
  }
}

TEST(Conv2dTest, Random3x3On5x5MatchesOracle) {
  std::mt19937_64 rng(3);
  const Tensor in = RandomTensor(rng, 2, 5, 5);
  const WeightTensor k = RandomWeight(rng, {3, 2, 3, 3});
  const WeightTensor b = RandomWeight(rng, {3});
  ExpectNear(Conv2d(in, k, b, {1, 1, 1}), OracleConv(in, k, b, 1, 1, 1), 1e-5);
}

TEST(Conv2dTest, RandomGeometriesMatchOracleAndReference) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int ic = UniformInt(rng, 1, 5), oc = UniformInt(rng, 1, 5);
    const int ks = UniformInt(rng, 0, 1) ? 3 : 1;
    const int stride = UniformInt(rng, 1, 2);
    const int dilation = ks == 3 ? 1 << UniformInt(rng, 0, 2) : 1;
    const int pad = ks == 3 ? dilation : 0;
    const int h = UniformInt(rng, 1, 12), w = UniformInt(rng, 1, 12);
    const Tensor in = RandomTensor(rng, ic, h, w);
    const WeightTensor k = RandomWeight(rng, {oc, ic, ks, ks});
    const WeightTensor b = RandomWeight(rng, {oc});
    const ConvGeometry g{stride, dilation, pad};
    const Tensor got = Conv2d(in, k, b, g);
    ExpectNear(got, OracleConv(in, k, b, stride, dilation, pad), 1e-5);
    ExpectIdentical(got, reference::Conv2d(in, k, b, g));
  }
}

TEST(Conv2dTest, SameSizeAndStrideTwoDimensions) {
  std::mt19937_64 rng(5);
  const WeightTensor k = RandomWeight(rng, {1, 1, 3, 3});
  const WeightTensor b = RandomWeight(rng, {1});
  for (int h : {1, 2, 7, 16}) {
    const Tensor in = RandomTensor(rng, 1, h, h + 1);
    const Tensor same = Conv2d(in, k, b, {1, 1, 1});
    EXPECT_EQ(same.height(), h);
    EXPECT_EQ(same.width(), h + 1);
    const Tensor half = Conv2d(in, k, b, {2, 1, 1});
    EXPECT_EQ(half.height(), (h + 1) / 2);
    EXPECT_EQ(half.width(), (h + 2) / 2);
  }
}

TEST(Conv2dTest, ShapeMismatchThrows) {
  std::mt19937_64 rng(6);
  const Tensor in = RandomTensor(rng, 2, 4, 4);
  const WeightTensor k = RandomWeight(rng, {3, 4, 3, 3});
  const WeightTensor b = RandomWeight(rng, {3});
  EXPECT_THROW(Conv2d(in, k, b, {1, 1, 1}), Error);
  const WeightTensor k2 = RandomWeight(rng, {3, 2, 3, 3});
  const WeightTensor b2 = RandomWeight(rng, {2});
  EXPECT_THROW(Conv2d(in, k2, b2, {1, 1, 1}), Error);
}

TEST(Conv2dTest, ThreadCountDoesNotChangeResults) {
  std::mt19937_64 rng(7);
  const Tensor in = RandomTensor(rng, 8, 33, 17);
  const WeightTensor k = RandomWeight(rng, {8, 8, 3, 3});
  const WeightTensor b = RandomWeight(rng, {8});
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Tensor one = Conv2d(in, k, b, {1, 2, 2});
  omp_set_num_threads(4);
  const Tensor four = Conv2d(in, k, b, {1, 2, 2});
  omp_set_num_threads(saved);
  ExpectIdentical(one, four);
}

TEST(PixelShuffleTest, ShapeAndLayout) {
  Tensor in(4, 1, 1);
  for (int c = 0; c < 4; ++c) in.at(c, 0, 0) = static_cast<float>(c);
  const Tensor out = PixelShuffle(in, 2);
  ASSERT_EQ(out.ShapeString(), "[1,2,2]");
  EXPECT_EQ(out.at(0, 0, 0), 0.0f);
  EXPECT_EQ(out.at(0, 0, 1), 1.0f);
  EXPECT_EQ(out.at(0, 1, 0), 2.0f);
  EXPECT_EQ(out.at(0, 1, 1), 3.0f);
  std::mt19937_64 rng(8);
  EXPECT_EQ(PixelShuffle(RandomTensor(rng, 4, 2, 2), 2).ShapeString(), "[1,4,4]");
  EXPECT_THROW(PixelShuffle(Tensor(6, 2, 2), 2), Error);
}

TEST(PixelShuffleTest, IsPermutationMatchingIndexFormula) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = UniformInt(rng, 1, 3);
    const int c = UniformInt(rng, 1, 3);
    const Tensor in = RandomTensor(rng, c * r * r, UniformInt(rng, 1, 6), UniformInt(rng, 1, 6));
    const Tensor out = PixelShuffle(in, r);
    for (int oc = 0; oc < c; ++oc) {
      for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < in.width(); ++x) {
          for (int dy = 0; dy < r; ++dy) {
            for (int dx = 0; dx < r; ++dx) {
              ASSERT_EQ(out.at(oc, r * y + dy, r * x + dx),
                        in.at(oc * r * r + dy * r + dx, y, x));
            }
          }
        }
      }
    }
    std::vector<float> a(in.values().begin(), in.values().end());
    std::vector<float> b(out.values().begin(), out.values().end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
    ExpectIdentical(out, reference::PixelShuffle(in, r));
  }
}

TEST(ResidualBlockTest, ZeroWeightsGiveIdentity) {
  std::mt19937_64 rng(10);
  const Tensor in = RandomTensor(rng, 4, 6, 5);
  const WeightTensor k{{4, 4, 3, 3}, std::vector<float>(144, 0.0f)};
  const WeightTensor b{{4}, std::vector<float>(4, 0.0f)};
  const ConvLayer l{&k, &b, {1, 1, 1}};
  ExpectIdentical(ResidualBlock(in, l, l), in);
}

TEST(ResidualBlockTest, MatchesComposedPrimitives) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int c = UniformInt(rng, 1, 6);
    const Tensor in = RandomTensor(rng, c, UniformInt(rng, 1, 9), UniformInt(rng, 1, 9));
    const WeightTensor k1 = RandomWeight(rng, {c, c, 3, 3}, 0.5);
    const WeightTensor b1 = RandomWeight(rng, {c});
    const WeightTensor k2 = RandomWeight(rng, {c, c, 3, 3}, 0.5);
    const WeightTensor b2 = RandomWeight(rng, {c});
    Tensor t = OracleConv(in, k1, b1, 1, 1, 1);
    for (float& v : t.values()) v = std::max(v, 0.0f);
    Tensor expect = OracleConv(t, k2, b2, 1, 1, 1);
    for (size_t i = 0; i < expect.size(); ++i) expect.data()[i] += in.data()[i];
    const ConvLayer l1{&k1, &b1, {1, 1, 1}}, l2{&k2, &b2, {1, 1, 1}};
    const Tensor got = ResidualBlock(in, l1, l2);
    EXPECT_EQ(got.ShapeString(), in.ShapeString());
    ExpectNear(got, expect, 1e-5);
    ExpectIdentical(got, reference::ResidualBlock(in, l1, l2));
  }
}

TEST(AtrousParallelTest, ConcatenatesThreeBranches) {
  std::mt19937_64 rng(12);
  const int cf = 64;
  const Tensor in = RandomTensor(rng, cf, 6, 7);
  std::vector<WeightTensor> ks, bs;
  for (int i = 0; i < 3; ++i) {
    ks.push_back(RandomWeight(rng, {cf, cf, 3, 3}, 0.1));
    bs.push_back(RandomWeight(rng, {cf}));
  }
  const ConvLayer layers[3] = {{&ks[0], &bs[0], {1, 1, 1}},
                               {&ks[1], &bs[1], {1, 2, 2}},
                               {&ks[2], &bs[2], {1, 4, 4}}};
  const Tensor out = AtrousParallel(in, layers);
  EXPECT_EQ(out.channels(), 192);
  EXPECT_EQ(out.height(), 6);
  EXPECT_EQ(out.width(), 7);
  // Dilation-1 branch is a plain conv; the others match the oracle.
  const Tensor plain = Conv2d(in, ks[0], bs[0], {1, 1, 1});
  for (size_t i = 0; i < plain.size(); ++i) EXPECT_EQ(out.data()[i], plain.data()[i]);
  const int rates[3] = {1, 2, 4};
  for (int b = 0; b < 3; ++b) {
    const Tensor expect = OracleConv(in, ks[b], bs[b], 1, rates[b], rates[b]);
    for (size_t i = 0; i < expect.size(); ++i) {
      ASSERT_NEAR(out.data()[b * expect.size() + i], expect.data()[i], 1e-5);
    }
  }
}

TEST(AtrousParallelTest, DilationTwoTouchesOnlyEvenOffsets) {
  // A single non-zero input pixel reaches exactly the positions at offsets
  // {-2, 0, 2} in each direction.
  Tensor in(1, 9, 9);
  in.at(0, 4, 4) = 1.0f;
  const WeightTensor k{{1, 1, 3, 3}, std::vector<float>(9, 1.0f)};
  const WeightTensor b{{1}, {0.0f}};
  const Tensor out = Conv2d(in, k, b, {1, 2, 2});
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) {
      const bool hit = (y == 2 || y == 4 || y == 6) && (x == 2 || x == 4 || x == 6);
      EXPECT_EQ(out.at(0, y, x), hit ? 1.0f : 0.0f) << y << "," << x;
    }
  }
}

TEST(ElementwiseTest, ReluAddConcat) {
  Tensor a(1, 1, 3);
  a.at(0, 0, 0) = -1.0f;
  a.at(0, 0, 1) = 0.0f;
  a.at(0, 0, 2) = 2.0f;
  ReluInPlace(a);
  EXPECT_EQ(a.at(0, 0, 0), 0.0f);
  EXPECT_EQ(a.at(0, 0, 2), 2.0f);
  Tensor b(1, 1, 3, 1.0f);
  AddInPlace(a, b);
  EXPECT_EQ(a.at(0, 0, 2), 3.0f);
  EXPECT_THROW(AddInPlace(a, Tensor(2, 1, 3)), Error);
  const Tensor parts[2] = {a, b};
  const Tensor cat = ConcatChannels(parts);
  EXPECT_EQ(cat.channels(), 2);
  EXPECT_EQ(cat.at(1, 0, 0), 1.0f);
  const Tensor bad[2] = {a, Tensor(1, 2, 3)};
  EXPECT_THROW(ConcatChannels(bad), Error);
}

}  // namespace
}  // namespace l3c
