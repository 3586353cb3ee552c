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

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "l3c/byte_io.h"
#include "l3c/codec.h"
#include "l3c/container.h"
#include "l3c/error.h"
#include "l3c/golden.h"
#include "l3c/image.h"
#include "l3c/weights.h"

namespace l3c::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

double SecondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string Fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

void Emit(ReportFormat format, const json& j, const std::string& text,
          std::ostream& out, json* sink) {
  if (format == ReportFormat::kJson) {
    out << j.dump(2) << "\n";
  } else {
    out << text;
  }
  if (sink != nullptr) *sink = j;
}

json ScalesJson(const CodecTrace& trace) {
  json arr = json::array();
  for (const ScaleStats& s : trace.scales) {
    arr.push_back({{"scale", s.scale},
                   {"channels", s.channels},
                   {"height", s.height},
                   {"width", s.width},
                   {"payload_bytes", s.payload_bytes},
                   {"payload_bits", 8 * s.payload_bytes},
                   {"nll_bits", s.nll_bits}});
  }
  return arr;
}

json ContainerJson(const Container& c) {
  json streams = json::array();
  for (const SubStream& s : c.streams) {
    streams.push_back({{"scale", s.scale},
                       {"channels", s.channels},
                       {"height", s.height},
                       {"width", s.width},
                       {"payload_bytes", s.payload.size()}});
  }
  return {{"version", c.version},
          {"mode", ModelKindName(c.mode)},
          {"scales", c.scales},
          {"lowest_stored_scale", c.lowest_stored_scale},
          {"original_height", c.original_height},
          {"original_width", c.original_width},
          {"padded_height", c.padded_height},
          {"padded_width", c.padded_width},
          {"checksum", c.checksum},
          {"header_bytes", kContainerHeaderBytes},
          {"total_bytes", c.SerializedBytes()},
          {"streams", streams}};
}

bool IsContainerFile(const std::vector<uint8_t>& bytes) {
  return bytes.size() >= 4 && bytes[0] == 'L' && bytes[1] == '3' &&
         bytes[2] == 'C' && bytes[3] == 'I';
}

bool IsImagePath(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return ext == ".png" || ext == ".ppm";
}

// Runs `body`, mapping library errors to exit status 1 with a message.
template <typename Body>
int Guard(const char* command, std::ostream& err, Body body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << command << ": " << e.what() << "\n";
  }
  return 1;
}

struct BenchRow {
  std::string name;
  int width = 0;
  int height = 0;
  size_t bytes = 0;
  double nll_bits = 0.0;
  std::map<int, size_t> scale_bits;
  size_t overhead_bits = 0;
  double encode_s = 0.0;
  double decode_s = 0.0;
  std::map<std::string, std::optional<size_t>> external_bytes;
};

}  // namespace

int Encode(const EncodeOptions& o, std::ostream& out, std::ostream& err, json* sink) {
  return Guard("encode", err, [&] {
    const CodecModel model = LoadModel(o.weights);
    if (o.mode && ParseModelKind(*o.mode) != model.spec().kind) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--mode " + *o.mode + " does not match the " +
                      ModelKindName(model.spec().kind) + " weight file");
    }
    const Image image = ReadImage(o.input);
    const auto t0 = std::chrono::steady_clock::now();
    CodecTrace trace;
    const std::vector<uint8_t> bytes = EncodeImageBytes(model, image, &trace);
    const double seconds = SecondsSince(t0);
    WriteFileBytes(o.output, bytes);
    const double bpsp = Bpsp(bytes.size(), image.width, image.height);
    json j = {{"command", "encode"},
              {"input", o.input},
              {"output", o.output},
              {"mode", ModelKindName(model.spec().kind)},
              {"width", image.width},
              {"height", image.height},
              {"bytes", bytes.size()},
              {"bpsp", bpsp},
              {"encode_seconds", seconds},
              {"scales", ScalesJson(trace)}};
    std::ostringstream text;
    text << o.input << " -> " << o.output << ": " << bytes.size() << " bytes, "
         << Fixed(bpsp, 4) << " bpsp, encode " << Fixed(seconds, 3) << " s\n";
    Emit(o.report, j, text.str(), out, sink);
    return 0;
  });
}

int Decode(const DecodeOptions& o, std::ostream& out, std::ostream& err, json* sink) {
  return Guard("decode", err, [&] {
    const CodecModel model = LoadModel(o.weights);
    const std::vector<uint8_t> bytes = ReadFileBytes(o.input);
    const auto t0 = std::chrono::steady_clock::now();
    const Image image = DecodeImageBytes(model, bytes);
    const double seconds = SecondsSince(t0);
    WriteImage(o.output, image);
    const double bpsp = Bpsp(bytes.size(), image.width, image.height);
    json j = {{"command", "decode"},     {"input", o.input},
              {"output", o.output},      {"width", image.width},
              {"height", image.height},  {"bytes", bytes.size()},
              {"bpsp", bpsp},            {"decode_seconds", seconds}};
    std::ostringstream text;
    text << o.input << " -> " << o.output << ": " << image.width << "x"
         << image.height << ", " << Fixed(bpsp, 4) << " bpsp, decode "
         << Fixed(seconds, 3) << " s\n";
    Emit(o.report, j, text.str(), out, sink);
    return 0;
  });
}

int Sample(const SampleOptions& o, std::ostream& out, std::ostream& err, json* sink) {
  return Guard("sample", err, [&] {
    const CodecModel model = LoadModel(o.weights);
    const std::vector<uint8_t> bytes = ReadFileBytes(o.input);
    const Container full = IsContainerFile(bytes)
                               ? ParseContainer(bytes)
                               : EncodeImage(model, ReadImage(o.input));
    const Container kept = DropScalesBelow(full, o.lowest_stored_scale);
    std::optional<double> fraction;
    if (full.lowest_stored_scale == 0) {
      fraction = StoredBitFraction(full, o.lowest_stored_scale);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const Image image = SampleImage(model, kept, o.seed);
    const double seconds = SecondsSince(t0);
    WriteImage(o.output, image);
    const size_t stored_bits = 8 * kept.PayloadBytes();
    json j = {{"command", "sample"},
              {"input", o.input},
              {"output", o.output},
              {"stored_scales", {o.lowest_stored_scale, full.scales}},
              {"seed", o.seed},
              {"stored_payload_bits", stored_bits},
              {"stored_bpsp", Bpsp(kept.SerializedBytes(), image.width, image.height)},
              {"sample_seconds", seconds}};
    j["stored_bit_fraction"] = fraction ? json(*fraction) : json(nullptr);
    std::ostringstream text;
    text << o.input << " -> " << o.output << ": stored scales "
         << o.lowest_stored_scale << ".." << full.scales << ", " << stored_bits
         << " payload bits";
    if (fraction) text << " (" << Fixed(100.0 * *fraction, 1) << "% of total)";
    text << ", seed " << o.seed << "\n";
    Emit(o.report, j, text.str(), out, sink);
    return 0;
  });
}

int Inspect(const InspectOptions& o, std::ostream& out, std::ostream& err, json* sink) {
  return Guard("inspect", err, [&] {
    const Container c = ParseContainer(ReadFileBytes(o.input));
    json j = ContainerJson(c);
    j["command"] = "inspect";
    j["input"] = o.input;
    Emit(o.report, j, DescribeContainer(c), out, sink);
    return 0;
  });
}

int Bench(const BenchOptions& o, std::ostream& out, std::ostream& err, json* sink) {
  return Guard("bench", err, [&] {
    const CodecModel model = LoadModel(o.weights);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(o.corpus)) {
      if (entry.is_regular_file() && IsImagePath(entry.path())) {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "no .png or .ppm files in " + o.corpus);
    }
    std::vector<BenchRow> rows;
    for (const fs::path& path : files) {
      Image image = ReadImage(path.string());
      if (o.crop) image = CenterCrop(image, o.crop->first, o.crop->second);
      BenchRow row;
      row.name = path.filename().string();
      row.width = image.width;
      row.height = image.height;
      CodecTrace trace;
      auto t0 = std::chrono::steady_clock::now();
      const Container c = EncodeImage(model, image, &trace);
      const std::vector<uint8_t> bytes = SerializeContainer(c);
      row.encode_s = SecondsSince(t0);
      t0 = std::chrono::steady_clock::now();
      Image decoded;
      try {
        decoded = DecodeImageBytes(model, bytes);
      } catch (const Error& e) {
        err << "bench: round trip failed for " << row.name << ": " << e.what() << "\n";
        return 1;
      }
      row.decode_s = SecondsSince(t0);
      if (!(decoded == image)) {
        err << "bench: round trip failed for " << row.name << "\n";
        return 1;
      }
      row.bytes = bytes.size();
      row.overhead_bits = 8 * kContainerHeaderBytes;
      for (const ScaleStats& s : trace.scales) {
        row.scale_bits[s.scale] = 8 * s.payload_bytes;
        row.overhead_bits += 8 * kSubStreamHeaderBytes;
        row.nll_bits += s.nll_bits;
      }
      for (const std::string& dir : o.compare) {
        std::optional<size_t> size;
        for (const auto& entry : fs::directory_iterator(dir)) {
          if (entry.is_regular_file() && entry.path().stem() == path.stem()) {
            size = entry.file_size();
            break;
          }
        }
        row.external_bytes[dir] = size;
      }
      rows.push_back(std::move(row));
    }

    size_t total_bits = 0;
    size_t total_subpixels = 0;
    double total_nll = 0.0;
    double enc_s = 0.0;
    double dec_s = 0.0;
    std::map<int, size_t> scale_totals;
    std::map<std::string, std::pair<size_t, size_t>> ext_totals;  // bits, subpixels
    json jrows = json::array();
    std::ostringstream text;
    text << std::left << std::setw(28) << "image" << std::right << std::setw(11)
         << "size" << std::setw(10) << "bytes" << std::setw(9) << "bpsp"
         << std::setw(9) << "nll" << std::setw(10) << "enc[s]" << std::setw(10)
         << "dec[s]";
    for (const std::string& dir : o.compare) {
      text << std::setw(14) << fs::path(dir).filename().string();
    }
    text << "\n";
    for (const BenchRow& r : rows) {
      const size_t subpixels = 3ull * r.width * r.height;
      total_bits += 8 * r.bytes;
      total_subpixels += subpixels;
      total_nll += r.nll_bits;
      enc_s += r.encode_s;
      dec_s += r.decode_s;
      json scales = json::object();
      for (const auto& [s, bits] : r.scale_bits) {
        scale_totals[s] += bits;
        scales[std::to_string(s)] = bits;
      }
      json ext = json::object();
      for (const auto& [dir, bytes] : r.external_bytes) {
        if (bytes) {
          ext[dir] = 8.0 * *bytes / subpixels;
          ext_totals[dir].first += 8 * *bytes;
          ext_totals[dir].second += subpixels;
        } else {
          ext[dir] = nullptr;
        }
      }
      const double bpsp = Bpsp(r.bytes, r.width, r.height);
      jrows.push_back({{"name", r.name},
                       {"width", r.width},
                       {"height", r.height},
                       {"bytes", r.bytes},
                       {"bits", 8 * r.bytes},
                       {"bpsp", bpsp},
                       {"nll_bpsp", r.nll_bits / subpixels},
                       {"scale_bits", scales},
                       {"overhead_bits", r.overhead_bits},
                       {"encode_seconds", r.encode_s},
                       {"decode_seconds", r.decode_s},
                       {"lossless", true},
                       {"external_bpsp", ext}});
      text << std::left << std::setw(28) << r.name << std::right << std::setw(11)
           << (std::to_string(r.width) + "x" + std::to_string(r.height))
           << std::setw(10) << r.bytes << std::setw(9) << Fixed(bpsp, 4)
           << std::setw(9) << Fixed(r.nll_bits / subpixels, 4) << std::setw(10)
           << Fixed(r.encode_s, 3) << std::setw(10) << Fixed(r.decode_s, 3);
      for (const std::string& dir : o.compare) {
        const auto& b = r.external_bytes.at(dir);
        text << std::setw(14) << (b ? Fixed(8.0 * *b / subpixels, 4) : "-");
      }
      text << "\n";
    }
    json jscales = json::object();
    for (const auto& [s, bits] : scale_totals) jscales[std::to_string(s)] = bits;
    json jext = json::object();
    for (const auto& [dir, t] : ext_totals) {
      jext[dir] = static_cast<double>(t.first) / t.second;
    }
    const double bpsp = static_cast<double>(total_bits) / total_subpixels;
    json j = {{"command", "bench"},
              {"corpus", o.corpus},
              {"mode", ModelKindName(model.spec().kind)},
              {"threads", omp_get_max_threads()},
              {"images", jrows},
              {"aggregate",
               {{"images", rows.size()},
                {"bits", total_bits},
                {"subpixels", total_subpixels},
                {"bpsp", bpsp},
                {"nll_bpsp", total_nll / total_subpixels},
                {"scale_bits", jscales},
                {"encode_seconds", enc_s},
                {"decode_seconds", dec_s},
                {"external_bpsp", jext}}}};
    if (o.crop) j["crop"] = {o.crop->first, o.crop->second};
    text << "aggregate: " << rows.size() << " images, " << Fixed(bpsp, 4)
         << " bpsp (nll " << Fixed(total_nll / total_subpixels, 4) << "), encode "
         << Fixed(enc_s, 3) << " s, decode " << Fixed(dec_s, 3) << " s\n";
    text << "bits per scale:";
    for (auto it = scale_totals.rbegin(); it != scale_totals.rend(); ++it) {
      text << " s" << it->first << "=" << it->second;
    }
    text << "\n";
    Emit(o.report, j, text.str(), out, sink);
    return 0;
  });
}

int InitWeights(const InitWeightsOptions& o, std::ostream& out, std::ostream& err) {
  return Guard("init-weights", err, [&] {
    NetworkSpec spec;
    spec.kind = ParseModelKind(o.mode);
    spec.scales = o.scales;
    spec.filters = o.filters;
    spec.latent_channels = o.latent_channels;
    spec.mixtures = o.mixtures;
    spec.resblocks = o.resblocks;
    spec.levels = o.levels;
    spec.sigma_q = static_cast<float>(o.sigma_q);
    const ModelWeights w = RandomWeights(spec, o.seed, static_cast<float>(o.gain));
    const std::vector<uint8_t> bytes = SaveWeights(w);
    WriteFileBytes(o.output, bytes);
    out << "wrote " << o.output << ": " << ModelKindName(spec.kind) << ", "
        << w.tensors.size() << " tensors, " << bytes.size() << " bytes\n";
    return 0;
  });
}

int GoldenExport(const GoldenExportOptions& o, std::ostream& out, std::ostream& err) {
  return Guard("golden-export", err, [&] {
    const CodecModel model = LoadModel(o.weights);
    const GoldenVector g = ComputeGolden(model, ReadImage(o.input));
    WriteGoldenBundle(o.output_dir, model.weights(), g);
    out << "wrote golden bundle " << o.output_dir << "\n";
    return 0;
  });
}

int GoldenCheck(const GoldenCheckOptions& o, std::ostream& out, std::ostream& err,
                json* sink) {
  return Guard("golden-check", err, [&] {
    GoldenBundle b = ReadGoldenBundle(o.bundle_dir);
    const CodecModel model(std::move(b.weights));
    const GoldenReport r = CheckGolden(model, b.golden);
    const bool ok = r.Passed(o.tolerance);
    json j = {{"command", "golden-check"},
              {"bundle", o.bundle_dir},
              {"passed", ok},
              {"tolerance", o.tolerance},
              {"max_head_abs_diff", r.max_head_abs_diff},
              {"latent_mismatches", r.latent_mismatches},
              {"max_nll_abs_diff", r.max_nll_abs_diff},
              {"container_identical", r.container_identical},
              {"shapes_match", r.shapes_match}};
    std::ostringstream text;
    text << (ok ? "PASS" : "FAIL") << " " << o.bundle_dir << ": max |head diff| "
         << r.max_head_abs_diff << ", latent mismatches " << r.latent_mismatches
         << ", container " << (r.container_identical ? "identical" : "differs")
         << "\n";
    Emit(o.report, j, text.str(), out, sink);
    return ok ? 0 : 2;
  });
}

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lossless image codec with learned hierarchical entropy models"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP worker threads (0 = default)")
      ->check(CLI::NonNegativeNumber);
  std::string report = "text";
  const auto add_report = [&](CLI::App* cmd) {
    cmd->add_option("--report", report, "Report format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  std::string crop;

  EncodeOptions enc;
  std::string enc_mode;
  CLI::App* c_enc = app.add_subcommand("encode", "Compress an image");
  c_enc->add_option("input", enc.input, "PNG or PPM image")->required();
  c_enc->add_option("output", enc.output, "Container path")->required();
  c_enc->add_option("--weights", enc.weights, "Weight file")->required();
  c_enc->add_option("--mode", enc_mode, "Expected model kind")
      ->check(CLI::IsMember({"learned", "rgb", "rgb-shared"}));
  add_report(c_enc);

  DecodeOptions dec;
  CLI::App* c_dec = app.add_subcommand("decode", "Decompress a container");
  c_dec->add_option("input", dec.input, "Container path")->required();
  c_dec->add_option("output", dec.output, "Image path (.png or .ppm)")->required();
  c_dec->add_option("--weights", dec.weights, "Weight file")->required();
  add_report(c_dec);

  SampleOptions smp;
  CLI::App* c_smp = app.add_subcommand(
      "sample", "Keep scales >= --scales and sample the rest down to the image");
  c_smp->add_option("input", smp.input, "Container or image")->required();
  c_smp->add_option("output", smp.output, "Image path")->required();
  c_smp->add_option("--weights", smp.weights, "Weight file")->required();
  c_smp->add_option("--scales", smp.lowest_stored_scale, "Lowest stored scale")
      ->check(CLI::NonNegativeNumber);
  c_smp->add_option("--seed", smp.seed, "Sampling seed");
  add_report(c_smp);

  InspectOptions ins;
  CLI::App* c_ins = app.add_subcommand("inspect", "Describe a container");
  c_ins->add_option("input", ins.input, "Container path")->required();
  add_report(c_ins);

  BenchOptions bench;
  CLI::App* c_bench = app.add_subcommand("bench", "Round-trip a corpus and report bpsp");
  c_bench->add_option("corpus", bench.corpus, "Directory of PNG/PPM images")->required();
  c_bench->add_option("--weights", bench.weights, "Weight file")->required();
  c_bench->add_option("--crop", crop, "Center crop WxH");
  c_bench->add_option("--compare", bench.compare,
                      "Directory of external codec outputs named like the inputs");
  add_report(c_bench);

  InitWeightsOptions init;
  CLI::App* c_init = app.add_subcommand("init-weights", "Write randomly initialized weights");
  c_init->add_option("output", init.output, "Weight file")->required();
  c_init->add_option("--mode", init.mode, "Model kind")
      ->check(CLI::IsMember({"learned", "rgb", "rgb-shared"}));
  c_init->add_option("--scales", init.scales, "Number of scales S");
  c_init->add_option("--filters", init.filters, "Filters C_f");
  c_init->add_option("--latent-channels", init.latent_channels, "Latent channels C");
  c_init->add_option("--mixtures", init.mixtures, "Mixture components K");
  c_init->add_option("--resblocks", init.resblocks, "Residual blocks per network");
  c_init->add_option("--levels", init.levels, "Quantizer levels L");
  c_init->add_option("--sigma-q", init.sigma_q, "Soft quantization sharpness");
  c_init->add_option("--seed", init.seed, "Initialization seed");
  c_init->add_option("--gain", init.gain, "Initialization gain");

  GoldenExportOptions gexp;
  CLI::App* c_gexp = app.add_subcommand("golden-export", "Write a golden vector bundle");
  c_gexp->add_option("input", gexp.input, "Input image")->required();
  c_gexp->add_option("output", gexp.output_dir, "Bundle directory")->required();
  c_gexp->add_option("--weights", gexp.weights, "Weight file")->required();

  GoldenCheckOptions gchk;
  CLI::App* c_gchk = app.add_subcommand("golden-check", "Verify a golden vector bundle");
  c_gchk->add_option("bundle", gchk.bundle_dir, "Bundle directory")->required();
  c_gchk->add_option("--tolerance", gchk.tolerance, "Absolute tolerance on heads");
  add_report(c_gchk);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  if (threads > 0) omp_set_num_threads(threads);
  const ReportFormat format = report == "json" ? ReportFormat::kJson : ReportFormat::kText;

  if (c_enc->parsed()) {
    if (!enc_mode.empty()) enc.mode = enc_mode;
    enc.report = format;
    return Encode(enc, out, err);
  }
  if (c_dec->parsed()) {
    dec.report = format;
    return Decode(dec, out, err);
  }
  if (c_smp->parsed()) {
    smp.report = format;
    return Sample(smp, out, err);
  }
  if (c_ins->parsed()) {
    ins.report = format;
    return Inspect(ins, out, err);
  }
  if (c_bench->parsed()) {
    bench.report = format;
    if (!crop.empty()) {
      int w = 0;
      int h = 0;
      char x = 0;
      std::istringstream is(crop);
      if (!(is >> w >> x >> h) || (x != 'x' && x != 'X') || w < 1 || h < 1 ||
          !is.eof()) {
        err << "bench: --crop expects WxH, got '" << crop << "'\n";
        return 1;
      }
      bench.crop = std::make_pair(w, h);
    }
    return Bench(bench, out, err);
  }
  if (c_init->parsed()) return InitWeights(init, out, err);
  if (c_gexp->parsed()) return GoldenExport(gexp, out, err);
  if (c_gchk->parsed()) {
    gchk.report = format;
    return GoldenCheck(gchk, out, err);
  }
  return 1;
}

}  // namespace l3c::cli
