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

#include "cli.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "l3c/byte_io.h"
#include "l3c/codec.h"
#include "l3c/image.h"
#include "l3c/weights.h"
#include "test_util.h"

namespace l3c::cli {
namespace {

using nlohmann::json;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result RunArgs(std::vector<std::string> args) {
  args.insert(args.begin(), "l3c");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(1);
    image_ = test::RandomImage(rng, 21, 14);
    WriteImage(dir_.File("in.png"), image_);
    for (ModelKind kind : test::kAllKinds) {
      const std::string path = Weights(kind);
      WriteFileBytes(path, SaveWeights(RandomWeights(test::TinySpec(kind), 2)));
    }
  }
  std::string Weights(ModelKind kind) const {
    return dir_.File(std::string(ModelKindName(kind)) + ".l3cw");
  }

  test::TempDir dir_{"cli"};
  Image image_;
};

TEST_F(CliTest, EncodeDecodeRoundTripInEveryMode) {
  for (ModelKind kind : test::kAllKinds) {
    const std::string mode = ModelKindName(kind);
    const std::string c = dir_.File(mode + ".l3c");
    const std::string o = dir_.File(mode + ".ppm");
    Result r = RunArgs({"encode", dir_.File("in.png"), c, "--weights", Weights(kind),
                        "--mode", mode});
    ASSERT_EQ(r.status, 0) << r.err;
    r = RunArgs({"decode", c, o, "--weights", Weights(kind)});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(ReadImage(o), image_);
  }
}

TEST_F(CliTest, ModeMismatchIsAnError) {
  const Result r = RunArgs({"encode", dir_.File("in.png"), dir_.File("x.l3c"),
                            "--weights", Weights(ModelKind::kRgb), "--mode", "learned"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("--mode learned"), std::string::npos) << r.err;
}

TEST_F(CliTest, JsonReportMatchesLibrary) {
  const std::string c = dir_.File("j.l3c");
  const Result r = RunArgs({"encode", dir_.File("in.png"), c, "--weights",
                            Weights(ModelKind::kLearned), "--report", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  const std::vector<uint8_t> bytes = ReadFileBytes(c);
  EXPECT_EQ(j["bytes"].get<size_t>(), bytes.size());
  EXPECT_DOUBLE_EQ(j["bpsp"].get<double>(), Bpsp(bytes.size(), 21, 14));
  size_t scale_bits = 0;
  for (const json& s : j["scales"]) scale_bits += s["payload_bits"].get<size_t>();
  EXPECT_EQ(scale_bits, 8 * ParseContainer(bytes).PayloadBytes());
  // The library produces the same bytes.
  const CodecModel model = LoadModel(Weights(ModelKind::kLearned));
  EXPECT_EQ(EncodeImageBytes(model, image_), bytes);
}

TEST_F(CliTest, InspectJson) {
  const std::string c = dir_.File("i.l3c");
  ASSERT_EQ(RunArgs({"encode", dir_.File("in.png"), c, "--weights",
                     Weights(ModelKind::kRgbShared)}).status, 0);
  const Result r = RunArgs({"inspect", c, "--report", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["mode"], "rgb-shared");
  EXPECT_EQ(j["original_width"], 21);
  EXPECT_EQ(j["padded_width"], 24);
  EXPECT_EQ(j["streams"].size(), 4u);
  EXPECT_EQ(j["total_bytes"].get<size_t>(), ReadFileBytes(c).size());
  EXPECT_EQ(RunArgs({"inspect", dir_.File("in.png")}).status, 1);
}

TEST_F(CliTest, SampleWritesImageOfInputSize) {
  const std::string c = dir_.File("s.l3c");
  ASSERT_EQ(RunArgs({"encode", dir_.File("in.png"), c, "--weights",
                     Weights(ModelKind::kLearned)}).status, 0);
  const Result r = RunArgs({"sample", c, dir_.File("s.png"), "--weights",
                            Weights(ModelKind::kLearned), "--scales", "2", "--seed",
                            "4", "--report", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const Image s = ReadImage(dir_.File("s.png"));
  EXPECT_EQ(s.width, 21);
  EXPECT_EQ(s.height, 14);
  const double f = json::parse(r.out)["stored_bit_fraction"].get<double>();
  EXPECT_GT(f, 0.0);
  EXPECT_LT(f, 1.0);
}

TEST_F(CliTest, WrongWeightsFailDecoding) {
  const std::string c = dir_.File("w.l3c");
  ASSERT_EQ(RunArgs({"encode", dir_.File("in.png"), c, "--weights",
                     Weights(ModelKind::kLearned)}).status, 0);
  const std::string other = dir_.File("other.l3cw");
  WriteFileBytes(other,
                 SaveWeights(RandomWeights(test::TinySpec(ModelKind::kLearned), 99)));
  const Result r = RunArgs({"decode", c, dir_.File("w.ppm"), "--weights", other});
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, BenchRowsAndAggregate) {
  const std::filesystem::path corpus = dir_.path() / "corpus";
  std::filesystem::create_directories(corpus);
  std::filesystem::create_directories(dir_.path() / "ext");
  std::mt19937_64 rng(3);
  const Image a = test::RandomImage(rng, 30, 20);
  const Image b = test::RandomImage(rng, 9, 40);
  WriteImage((corpus / "a.png").string(), a);
  WriteImage((corpus / "b.ppm").string(), b);
  WriteFileBytes((dir_.path() / "ext" / "a.webp").string(), std::vector<uint8_t>(100));
  const Result r = RunArgs({"bench", corpus.string(), "--weights",
                            Weights(ModelKind::kRgb), "--crop", "16x16", "--compare",
                            (dir_.path() / "ext").string(), "--report", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["images"].size(), 2u);
  size_t bits = 0;
  size_t subpixels = 0;
  for (const json& row : j["images"]) {
    EXPECT_TRUE(row["lossless"].get<bool>());
    size_t scale_sum = 0;
    for (const auto& [k, v] : row["scale_bits"].items()) scale_sum += v.get<size_t>();
    EXPECT_EQ(scale_sum + row["overhead_bits"].get<size_t>(), row["bits"].get<size_t>());
    bits += row["bits"].get<size_t>();
    subpixels += 3 * row["width"].get<size_t>() * row["height"].get<size_t>();
  }
  EXPECT_EQ(j["images"][0]["width"], 16);
  EXPECT_EQ(j["images"][1]["width"], 9);
  EXPECT_EQ(j["images"][1]["height"], 16);
  EXPECT_DOUBLE_EQ(j["aggregate"]["bpsp"].get<double>(), double(bits) / subpixels);
  const std::string ext = (dir_.path() / "ext").string();
  EXPECT_DOUBLE_EQ(j["images"][0]["external_bpsp"][ext].get<double>(), 800.0 / (3 * 256));
  EXPECT_TRUE(j["images"][1]["external_bpsp"][ext].is_null());
}

TEST_F(CliTest, BenchRejectsBadCropAndEmptyCorpus) {
  std::filesystem::create_directories(dir_.path() / "empty");
  EXPECT_EQ(RunArgs({"bench", (dir_.path() / "empty").string(), "--weights",
                     Weights(ModelKind::kRgb)}).status, 1);
  EXPECT_EQ(RunArgs({"bench", dir_.path().string(), "--weights",
                     Weights(ModelKind::kRgb), "--crop", "16by16"}).status, 1);
}

TEST_F(CliTest, InitWeightsAndGolden) {
  const std::string w = dir_.File("init.l3cw");
  ASSERT_EQ(RunArgs({"init-weights", w, "--mode", "rgb", "--scales", "2", "--filters",
                     "4", "--mixtures", "2", "--resblocks", "1"}).status, 0);
  const ModelWeights loaded = LoadWeights(ReadFileBytes(w));
  EXPECT_EQ(loaded.spec.kind, ModelKind::kRgb);
  EXPECT_EQ(loaded.spec.scales, 2);
  const std::string bundle = dir_.File("bundle");
  ASSERT_EQ(RunArgs({"golden-export", dir_.File("in.png"), bundle, "--weights", w}).status, 0);
  Result r = RunArgs({"golden-check", bundle, "--report", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["passed"].get<bool>());
  // Swap in different weights of the same architecture.
  ASSERT_EQ(RunArgs({"init-weights", bundle + "/weights.l3cw", "--mode", "rgb",
                     "--scales", "2", "--filters", "4", "--mixtures", "2",
                     "--resblocks", "1", "--seed", "7"}).status, 0);
  r = RunArgs({"golden-check", bundle});
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(r.out.rfind("FAIL", 0), 0u);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_NE(RunArgs({}).status, 0);
  EXPECT_NE(RunArgs({"encode"}).status, 0);
  EXPECT_NE(RunArgs({"frobnicate"}).status, 0);
  EXPECT_EQ(RunArgs({"--help"}).status, 0);
}

}  // namespace
}  // namespace l3c::cli
