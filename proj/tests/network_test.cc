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

#include "l3c/network.h"

#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "l3c/error.h"
#include "l3c/reference_kernels.h"
#include "test_util.h"

namespace l3c {
namespace {

using test::RandomTensor;
using test::TinySpec;

std::shared_ptr<const ModelWeights> Weights(const NetworkSpec& spec, uint64_t seed) {
  return std::make_shared<const ModelWeights>(RandomWeights(spec, seed));
}

std::shared_ptr<const ModelWeights> ZeroWeights(const NetworkSpec& spec, float bias) {
  ModelWeights w = RandomWeights(spec, 0);
  for (auto& [name, t] : w.tensors) {
    const bool is_bias = name.size() > 5 && name.substr(name.size() - 5) == ".bias";
    std::fill(t.data.begin(), t.data.end(), is_bias ? bias : 0.0f);
  }
  return std::make_shared<const ModelWeights>(std::move(w));
}

TEST(NetworkTest, DimensionLaws) {
  NetworkSpec spec = TinySpec(ModelKind::kLearned);
  spec.latent_channels = 5;
  const Network net(Weights(spec, 1));
  std::mt19937_64 rng(2);
  const ExtractorOutput e1 = net.RunExtractor(1, RandomTensor(rng, 3, 16, 16));
  EXPECT_EQ(e1.latent.ShapeString(), "[5,8,8]");
  EXPECT_EQ(e1.features.ShapeString(), "[8,8,8]");
  const ExtractorOutput e2 = net.RunExtractor(2, e1.features);
  EXPECT_EQ(e2.latent.ShapeString(), "[5,4,4]");

  const Tensor f2 = net.RunPredictor(2, e2.latent, nullptr);
  EXPECT_EQ(f2.ShapeString(), "[8,8,8]");
  EXPECT_EQ(net.RunHead(2, f2).ShapeString(), "[" + std::to_string(3 * 5 * 2) + ",8,8]");
  const Tensor f1 = net.RunPredictor(1, e1.latent, &f2);
  EXPECT_EQ(f1.ShapeString(), "[8,16,16]");
  EXPECT_EQ(net.RunHead(1, f1).ShapeString(), "[24,16,16]");
}

TEST(NetworkTest, OddInputIsRejected) {
  const Network net(Weights(TinySpec(ModelKind::kLearned), 1));
  try {
    net.RunExtractor(1, Tensor(3, 7, 8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

TEST(NetworkTest, BaselinesHaveNoExtractors) {
  const Network net(Weights(TinySpec(ModelKind::kRgb), 1));
  EXPECT_THROW(net.RunExtractor(1, Tensor(3, 8, 8)), Error);
}

TEST(NetworkTest, ScaleOutOfRangeIsRejected) {
  const Network net(Weights(TinySpec(ModelKind::kLearned), 1));
  EXPECT_THROW(net.RunPredictor(0, Tensor(3, 2, 2), nullptr), Error);
  EXPECT_THROW(net.RunPredictor(4, Tensor(3, 2, 2), nullptr), Error);
}

TEST(NetworkTest, ZeroWeightsGiveConstantOutput) {
  const Network net(ZeroWeights(TinySpec(ModelKind::kLearned), 0.25f));
  std::mt19937_64 rng(3);
  const Tensor f = net.RunPredictor(2, RandomTensor(rng, 3, 4, 6), nullptr);
  const Tensor head = net.RunHead(2, f);
  for (float v : head.values()) EXPECT_EQ(v, 0.25f);
  for (float v : f.values()) EXPECT_EQ(v, f.values()[0]);
}

TEST(NetworkTest, MissingTopFeaturesEqualZeroTensor) {
  const Network net(Weights(TinySpec(ModelKind::kLearned), 4));
  std::mt19937_64 rng(5);
  const Tensor z = RandomTensor(rng, 3, 5, 3);
  const Tensor zero(8, 5, 3);
  const Tensor a = net.RunPredictor(3, z, nullptr);
  const Tensor b = net.RunPredictor(3, z, &zero);
  ASSERT_TRUE(a.SameShape(b));
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.data()[i], b.data()[i]);
  EXPECT_THROW(net.RunPredictor(3, z, &z), Error);
}

// D^(s) rebuilt from the serial reference kernels.
Tensor ReferencePredictor(const ModelWeights& w, int d, const Tensor& z,
                          const Tensor* f_next) {
  const std::string p = "dec" + std::to_string(d) + ".";
  auto conv = [&](const Tensor& x, const std::string& n, ConvGeometry g) {
    return reference::Conv2d(x, w.Get(p + n + ".weight"), w.Get(p + n + ".bias"), g);
  };
  Tensor t = conv(z, "expand", {1, 1, 0});
  if (f_next != nullptr) {
    for (size_t i = 0; i < t.size(); ++i) t.data()[i] += f_next->data()[i];
  }
  for (int r = 0; r < w.spec.resblocks; ++r) {
    const std::string rb = "res" + std::to_string(r);
    Tensor h = conv(t, rb + ".conv1", {1, 1, 1});
    for (float& v : h.values()) v = std::max(v, 0.0f);
    Tensor o = conv(h, rb + ".conv2", {1, 1, 1});
    for (size_t i = 0; i < o.size(); ++i) o.data()[i] += t.data()[i];
    t = o;
  }
  Tensor cat(3 * t.channels(), t.height(), t.width());
  int c0 = 0;
  for (int rate : {1, 2, 4}) {
    const Tensor a = conv(t, "atrous" + std::to_string(rate), {1, rate, rate});
    for (int c = 0; c < a.channels(); ++c, ++c0) {
      std::copy(a.Channel(c).begin(), a.Channel(c).end(), cat.Channel(c0).begin());
    }
  }
  return reference::PixelShuffle(conv(cat, "reduce", {1, 1, 0}), 2);
}

TEST(NetworkTest, PredictorMatchesReferenceComposition) {
  for (ModelKind kind : test::kAllKinds) {
    NetworkSpec spec = TinySpec(kind);
    spec.resblocks = 2;
    const auto w = Weights(spec, 6);
    const Network net(w);
    std::mt19937_64 rng(7);
    for (int s = 1; s <= spec.scales; ++s) {
      const Tensor z = RandomTensor(rng, spec.SymbolChannels(s), 3, 4);
      const Tensor f_next = RandomTensor(rng, spec.filters, 3, 4);
      const Tensor got = net.RunPredictor(s, z, &f_next);
      const Tensor want = ReferencePredictor(*w, spec.PredictorIndex(s), z, &f_next);
      ASSERT_TRUE(got.SameShape(want));
      for (size_t i = 0; i < got.size(); ++i) {
        ASSERT_NEAR(got.data()[i], want.data()[i], 1e-5) << s << " " << i;
      }
    }
  }
}

TEST(NetworkTest, SharedModelUsesOnePredictorForAllScales) {
  const auto w = Weights(TinySpec(ModelKind::kRgbShared), 8);
  const Network net(w);
  std::mt19937_64 rng(9);
  const Tensor z = RandomTensor(rng, 3, 4, 4);
  const Tensor a = net.RunPredictor(1, z, nullptr);
  const Tensor b = net.RunPredictor(3, z, nullptr);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.data()[i], b.data()[i]);
}

}  // namespace
}  // namespace l3c
