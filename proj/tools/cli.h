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

#ifndef L3C_TOOLS_CLI_H_
#define L3C_TOOLS_CLI_H_

// Command-line front end. Kept in a library so tests can run commands
// in-process and compare their reports with direct library calls.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace l3c::cli {

enum class ReportFormat { kText, kJson };

struct EncodeOptions {
  std::string input;
  std::string output;
  std::string weights;
  std::optional<std::string> mode;  // must match the weight file when set
  ReportFormat report = ReportFormat::kText;
};

struct DecodeOptions {
  std::string input;
  std::string output;
  std::string weights;
  ReportFormat report = ReportFormat::kText;
};

struct SampleOptions {
  std::string input;  // container or image
  std::string output;
  std::string weights;
  int lowest_stored_scale = 1;
  uint64_t seed = 0;
  ReportFormat report = ReportFormat::kText;
};

struct InspectOptions {
  std::string input;
  ReportFormat report = ReportFormat::kText;
};

struct BenchOptions {
  std::string corpus;
  std::string weights;
  std::optional<std::pair<int, int>> crop;  // width, height
  std::vector<std::string> compare;         // directories of external outputs
  ReportFormat report = ReportFormat::kText;
};

struct InitWeightsOptions {
  std::string output;
  std::string mode = "learned";
  int scales = 3;
  int filters = 64;
  int latent_channels = 5;
  int mixtures = 10;
  int resblocks = 8;
  int levels = 25;
  double sigma_q = 2.0;
  uint64_t seed = 0;
  double gain = 1.0;
};

struct GoldenExportOptions {
  std::string weights;
  std::string input;
  std::string output_dir;
};

struct GoldenCheckOptions {
  std::string bundle_dir;
  double tolerance = 1e-4;
  ReportFormat report = ReportFormat::kText;
};

// Each command returns a process exit status and writes its report to `out`
// and diagnostics to `err`. The JSON forms are also returned through
// `json` when non-null.
int Encode(const EncodeOptions& o, std::ostream& out, std::ostream& err,
           nlohmann::json* json = nullptr);
int Decode(const DecodeOptions& o, std::ostream& out, std::ostream& err,
           nlohmann::json* json = nullptr);
int Sample(const SampleOptions& o, std::ostream& out, std::ostream& err,
           nlohmann::json* json = nullptr);
int Inspect(const InspectOptions& o, std::ostream& out, std::ostream& err,
            nlohmann::json* json = nullptr);
int Bench(const BenchOptions& o, std::ostream& out, std::ostream& err,
          nlohmann::json* json = nullptr);
int InitWeights(const InitWeightsOptions& o, std::ostream& out, std::ostream& err);
int GoldenExport(const GoldenExportOptions& o, std::ostream& out, std::ostream& err);
int GoldenCheck(const GoldenCheckOptions& o, std::ostream& out, std::ostream& err,
                nlohmann::json* json = nullptr);

// Parses argv and dispatches.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace l3c::cli

#endif  // L3C_TOOLS_CLI_H_
