// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_REPORT_HPP_
#define TEEKV_REPORT_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "teekv/bench.hpp"
#include "teekv/result.hpp"

namespace teekv::bench {

// CSV schema (UTF-8, LF): header
//   bench,workload,shm,rate_or_size,op,service_ns
// and one row per sample.
inline constexpr std::string_view kCsvHeader = "bench,workload,shm,rate_or_size,op,service_ns";

struct CsvRow {
  std::string bench;
  std::string workload;
  std::string shm;
  uint64_t rate_or_size = 0;
  std::string op;
  uint64_t service_ns = 0;
};

uint32_t WriteCsv(const std::vector<Sample>& samples, const std::filesystem::path& path);
Result<std::vector<CsvRow>> ReadCsv(const std::filesystem::path& path);

inline CsvRow ToCsvRow(const Sample& s) {
  return {s.bench, s.workload, s.shm, s.rate_or_size, s.op, s.service_ns};
}

struct CellKey {
  std::string bench;
  std::string workload;
  std::string shm;
  uint64_t rate_or_size = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

// Per-cell aggregates. Percentiles are nearest-rank on the sorted service
// times; throughput is n / (total service time in seconds), the closed-loop
// rate of a saturated cell.
struct CellStats {
  uint64_t n = 0;
  uint64_t median_ns = 0;
  uint64_t p95_ns = 0;
  uint64_t p99_ns = 0;
  uint64_t total_ns = 0;
  double throughput_ops = 0.0;
};

std::map<CellKey, CellStats> Summarize(const std::vector<CsvRow>& rows);

enum class ReportFormat { kCsv, kSummary, kGnuplot };

// csv     -> <out_dir>/merged.csv
// summary -> <out_dir>/summary.txt
// gnuplot -> <out_dir>/kv_<shm>_<workload>.dat, storage_*.dat, plots.gp
// Empty input is kConfigError.
uint32_t EmitReport(const std::vector<CsvRow>& rows, ReportFormat format,
                    const std::filesystem::path& out_dir);

std::string RenderSummary(const std::vector<CsvRow>& rows);

}  // namespace teekv::bench

#endif  // TEEKV_REPORT_HPP_
