// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teekv/bench.hpp"
#include "teekv/platform.hpp"
#include "teekv/report.hpp"

namespace {

using teekv::bench::CsvRow;
using teekv::bench::Sample;

// "A..B" expands to the powers of two from A through B; otherwise a
// comma-separated list.
std::vector<uint64_t> ParseSweep(const std::string& text) {
  std::vector<uint64_t> values;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    uint64_t lo = std::stoull(text.substr(0, dots));
    uint64_t hi = std::stoull(text.substr(dots + 2));
    for (uint64_t v = lo; v <= hi; v *= 2) {
      values.push_back(v);
      if (v > hi / 2 && v != 0) break;
    }
    return values;
  }
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    std::string field = text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!field.empty()) values.push_back(std::stoull(field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

teekv::Platform MakePlatform(const std::string& store_root, uint64_t storage_seed,
                             bool storage_seed_set, int64_t latency_ns) {
  teekv::PlatformConfig config = teekv::PlatformConfig::FromEnvironment();
  if (!store_root.empty()) config.store_root = store_root;
  if (storage_seed_set) config.storage_seed = storage_seed;
  config.injected_latency = std::chrono::nanoseconds(latency_ns);
  return teekv::Platform(std::move(config));
}

int EmitSamples(const std::vector<Sample>& samples, const std::filesystem::path& out_dir,
                const char* file_name) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create %s: %s\n", out_dir.c_str(), ec.message().c_str());
    return 1;
  }
  std::filesystem::path csv = out_dir / file_name;
  if (uint32_t code = teekv::bench::WriteCsv(samples, csv); code != teekv::kSuccess) {
    std::fprintf(stderr, "error: writing %s: %s\n", csv.c_str(),
                 std::string(teekv::CodeName(code)).c_str());
    return 1;
  }
  std::vector<CsvRow> rows;
  rows.reserve(samples.size());
  for (const Sample& s : samples) rows.push_back(teekv::bench::ToCsvRow(s));
  std::fputs(teekv::bench::RenderSummary(rows).c_str(), stdout);
  std::printf("wrote %s (%zu samples)\n", csv.c_str(), samples.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teekv: desk-scale TEE-boundary emulator and benchmark harness"};
  app.require_subcommand(1);

  std::string store_root;
  app.add_option("--store-root", store_root,
                 "secure-storage root (default: $TEEKV_STORE_ROOT or ./teekv-store)");

  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark");
  bench_cmd->require_subcommand(1);

  // bench kv
  auto* kv_cmd = bench_cmd->add_subcommand("kv", "key-value TA throughput-latency benchmark");
  std::string workload_arg = "all";
  std::string shm_arg = "all";
  std::string rates_arg = "1..32768";
  uint64_t kv_seed = 42;
  int kv_ops = 256;
  uint64_t region_size = 512 * 1024;
  uint64_t kv_chunk = 1024;
  bool real_time = false;
  std::string kv_out = "bench-out";
  uint64_t storage_seed = 0;
  bool storage_seed_set = false;
  int64_t latency_ns = 0;
  kv_cmd->add_option("--workload", workload_arg, "put|get|del|mix20|mix50|all");
  kv_cmd->add_option("--shm", shm_arg, "whole|partial|temporary|ree|all");
  kv_cmd->add_option("--rates", rates_arg, "ops/s sweep: list 1,8,64 or range 1..32768");
  kv_cmd->add_option("--ops", kv_ops, "operations per cell");
  kv_cmd->add_option("--region-size", region_size, "shared region bytes");
  kv_cmd->add_option("--chunk", kv_chunk, "value bytes per operation");
  kv_cmd->add_option("--seed", kv_seed, "workload seed");
  kv_cmd->add_flag("--real-time", real_time, "pace on the wall clock instead of virtually");
  kv_cmd->add_option("--out", kv_out, "output directory");
  kv_cmd->add_option("--storage-seed", storage_seed, "secure-storage PRNG seed")
      ->each([&](const std::string&) { storage_seed_set = true; });
  kv_cmd->add_option("--boundary-latency-ns", latency_ns, "injected latency per world switch");

  // bench storage
  auto* st_cmd = bench_cmd->add_subcommand("storage", "secure-storage benchmark");
  std::string sizes_arg = "256..1048576";
  uint64_t st_chunk = 1024;
  int reps = 10;
  uint64_t st_seed = 42;
  std::string st_out = "bench-out";
  st_cmd->add_option("--sizes", sizes_arg, "byte sizes: list or range 256..1048576");
  st_cmd->add_option("--chunk", st_chunk, "chunk bytes (at most 1024)");
  st_cmd->add_option("--reps", reps, "repetitions per size");
  st_cmd->add_option("--seed", st_seed, "data seed");
  st_cmd->add_option("--out", st_out, "output directory");
  st_cmd->add_option("--storage-seed", storage_seed, "secure-storage PRNG seed")
      ->each([&](const std::string&) { storage_seed_set = true; });
  st_cmd->add_option("--boundary-latency-ns", latency_ns, "injected latency per world switch");

  // report
  auto* report_cmd = app.add_subcommand("report", "transform benchmark CSVs");
  std::string format_arg = "summary";
  std::vector<std::string> inputs;
  std::string report_out = "report-out";
  report_cmd->add_option("--format", format_arg, "csv|summary|gnuplot");
  report_cmd->add_option("--out", report_out, "output directory");
  report_cmd->add_option("inputs", inputs, "input CSV files")->required();

  CLI11_PARSE(app, argc, argv);

  if (kv_cmd->parsed()) {
    std::vector<teekv::bench::Workload> workloads;
    if (workload_arg == "all") {
      workloads = {teekv::bench::Workload::kPut, teekv::bench::Workload::kGet,
                   teekv::bench::Workload::kDel, teekv::bench::Workload::kMix20,
                   teekv::bench::Workload::kMix50};
    } else if (auto w = teekv::bench::ParseWorkload(workload_arg)) {
      workloads = {*w};
    } else {
      std::fprintf(stderr, "error: unknown workload '%s'\n", workload_arg.c_str());
      return 2;
    }
    std::vector<teekv::bench::ShmMode> modes;
    if (shm_arg == "all") {
      modes = {teekv::bench::ShmMode::kWhole, teekv::bench::ShmMode::kPartial,
               teekv::bench::ShmMode::kTemporary, teekv::bench::ShmMode::kReeDirect};
    } else if (auto m = teekv::bench::ParseShmMode(shm_arg)) {
      modes = {*m};
    } else {
      std::fprintf(stderr, "error: unknown shm mode '%s'\n", shm_arg.c_str());
      return 2;
    }

    teekv::Platform platform = MakePlatform(store_root, storage_seed, storage_seed_set,
                                            latency_ns);
    std::vector<Sample> samples;
    for (teekv::bench::Workload w : workloads) {
      for (teekv::bench::ShmMode m : modes) {
        teekv::bench::KvBenchConfig cfg;
        cfg.workload = w;
        cfg.shm = m;
        cfg.region_size = region_size;
        cfg.chunk = kv_chunk;
        cfg.ops = kv_ops;
        cfg.rates = ParseSweep(rates_arg);
        cfg.seed = kv_seed;
        cfg.real_time = real_time;
        auto run = teekv::bench::RunKvBench(platform, cfg);
        if (!run.ok()) {
          std::fprintf(stderr, "error: kv bench (%s, %s): %s\n",
                       std::string(WorkloadName(w)).c_str(), std::string(ShmModeName(m)).c_str(),
                       std::string(teekv::CodeName(run.code())).c_str());
          return 1;
        }
        auto& cell = run.value();
        samples.insert(samples.end(), cell.begin(), cell.end());
      }
    }
    return EmitSamples(samples, kv_out, "kv_samples.csv");
  }

  if (st_cmd->parsed()) {
    teekv::Platform platform = MakePlatform(store_root, storage_seed, storage_seed_set,
                                            latency_ns);
    teekv::bench::StorageBenchConfig cfg;
    cfg.sizes = ParseSweep(sizes_arg);
    cfg.chunk = st_chunk;
    cfg.repetitions = reps;
    cfg.seed = st_seed;
    auto run = teekv::bench::RunStorageBench(platform, cfg);
    if (!run.ok()) {
      std::fprintf(stderr, "error: storage bench: %s\n",
                   std::string(teekv::CodeName(run.code())).c_str());
      return 1;
    }
    return EmitSamples(run.value(), st_out, "storage_samples.csv");
  }

  if (report_cmd->parsed()) {
    teekv::bench::ReportFormat format;
    if (format_arg == "csv") {
      format = teekv::bench::ReportFormat::kCsv;
    } else if (format_arg == "summary") {
      format = teekv::bench::ReportFormat::kSummary;
    } else if (format_arg == "gnuplot") {
      format = teekv::bench::ReportFormat::kGnuplot;
    } else {
      std::fprintf(stderr, "error: unknown format '%s'\n", format_arg.c_str());
      return 2;
    }

    std::vector<CsvRow> rows;
    for (const std::string& input : inputs) {
      auto read = teekv::bench::ReadCsv(input);
      if (!read.ok()) {
        std::fprintf(stderr, "error: reading %s: %s\n", input.c_str(),
                     std::string(teekv::CodeName(read.code())).c_str());
        return 1;
      }
      rows.insert(rows.end(), read.value().begin(), read.value().end());
    }
    if (uint32_t code = teekv::bench::EmitReport(rows, format, report_out);
        code != teekv::kSuccess) {
      std::fprintf(stderr, "error: emitting report: %s\n",
                   std::string(teekv::CodeName(code)).c_str());
      return 1;
    }
    if (format == teekv::bench::ReportFormat::kSummary) {
      std::fputs(teekv::bench::RenderSummary(rows).c_str(), stdout);
    }
    std::printf("report written to %s\n", report_out.c_str());
    return 0;
  }

  return 0;
}
