// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/report.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace teekv::bench {

namespace {

uint64_t NearestRank(const std::vector<uint64_t>& sorted, double q) {
  if (sorted.empty()) return 0;
  size_t rank = static_cast<size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  if (rank == 0) rank = 1;
  if (rank > sorted.size()) rank = sorted.size();
  return sorted[rank - 1];
}

bool SplitFields(const std::string& line, std::array<std::string, 6>& fields) {
  size_t start = 0;
  for (int i = 0; i < 6; ++i) {
    size_t comma = line.find(',', start);
    bool last = (i == 5);
    if (last != (comma == std::string::npos)) return false;
    fields[i] = line.substr(start, last ? std::string::npos : comma - start);
    start = comma + 1;
  }
  return true;
}

}  // namespace

uint32_t WriteCsv(const std::vector<Sample>& samples, const std::filesystem::path& path) {
  if (samples.empty()) return kConfigError;
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings
  if (!out) return kIoError;
  out << kCsvHeader << "\n";
  for (const Sample& s : samples) {
    out << s.bench << ',' << s.workload << ',' << s.shm << ',' << s.rate_or_size << ',' << s.op
        << ',' << s.service_ns << "\n";
  }
  out.flush();
  return out ? kSuccess : kIoError;
}

Result<std::vector<CsvRow>> ReadCsv(const std::filesystem::path& path) {
  using R = Result<std::vector<CsvRow>>;
  std::ifstream in(path, std::ios::binary);
  if (!in) return R::Error(kIoError);

  std::string line;
  if (!std::getline(in, line)) return R::Error(kIoError);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) return R::Error(kIoError);

  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string, 6> fields;
    if (!SplitFields(line, fields)) return R::Error(kIoError);
    CsvRow row;
    row.bench = std::move(fields[0]);
    row.workload = std::move(fields[1]);
    row.shm = std::move(fields[2]);
    try {
      row.rate_or_size = std::stoull(fields[3]);
      row.service_ns = std::stoull(fields[5]);
    } catch (...) {
      return R::Error(kIoError);
    }
    row.op = std::move(fields[4]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<CellKey, CellStats> Summarize(const std::vector<CsvRow>& rows) {
  std::map<CellKey, std::vector<uint64_t>> cells;
  for (const CsvRow& row : rows) {
    cells[CellKey{row.bench, row.workload, row.shm, row.rate_or_size}].push_back(row.service_ns);
  }

  std::map<CellKey, CellStats> out;
  for (auto& [key, times] : cells) {
    std::sort(times.begin(), times.end());
    CellStats stats;
    stats.n = times.size();
    stats.median_ns = NearestRank(times, 0.50);
    stats.p95_ns = NearestRank(times, 0.95);
    stats.p99_ns = NearestRank(times, 0.99);
    for (uint64_t t : times) stats.total_ns += t;
    if (stats.total_ns > 0) {
      stats.throughput_ops =
          static_cast<double>(stats.n) / (static_cast<double>(stats.total_ns) / 1e9);
    }
    out.emplace(key, stats);
  }
  return out;
}

std::string RenderSummary(const std::vector<CsvRow>& rows) {
  std::map<CellKey, CellStats> cells = Summarize(rows);
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-8s %-9s %-10s %12s %6s %12s %12s %12s %14s\n", "bench",
                "workload", "shm", "rate|size", "n", "median_ns", "p95_ns", "p99_ns",
                "ops_per_sec");
  out << buf;
  for (const auto& [key, stats] : cells) {
    std::snprintf(buf, sizeof(buf),
                  "%-8s %-9s %-10s %12" PRIu64 " %6" PRIu64 " %12" PRIu64 " %12" PRIu64
                  " %12" PRIu64 " %14.1f\n",
                  key.bench.c_str(), key.workload.c_str(), key.shm.c_str(), key.rate_or_size,
                  stats.n, stats.median_ns, stats.p95_ns, stats.p99_ns, stats.throughput_ops);
    out << buf;
  }
  return out.str();
}

namespace {

uint32_t EmitMergedCsv(const std::vector<CsvRow>& rows, const std::filesystem::path& out_dir) {
  std::ofstream out(out_dir / "merged.csv", std::ios::binary);
  if (!out) return kIoError;
  out << kCsvHeader << "\n";
  for (const CsvRow& row : rows) {
    out << row.bench << ',' << row.workload << ',' << row.shm << ',' << row.rate_or_size << ','
        << row.op << ',' << row.service_ns << "\n";
  }
  out.flush();
  return out ? kSuccess : kIoError;
}

uint32_t EmitSummary(const std::vector<CsvRow>& rows, const std::filesystem::path& out_dir) {
  std::ofstream out(out_dir / "summary.txt", std::ios::binary);
  if (!out) return kIoError;
  out << RenderSummary(rows);
  out.flush();
  return out ? kSuccess : kIoError;
}

// Per (shm, workload): one file of "rate throughput median_us p95_us"
// rows (throughput-latency curves). Per storage command: execution time and
// throughput against size.
uint32_t EmitGnuplot(const std::vector<CsvRow>& rows, const std::filesystem::path& out_dir) {
  std::map<CellKey, CellStats> cells = Summarize(rows);

  std::set<std::pair<std::string, std::string>> kv_curves;
  std::set<std::string> storage_curves;
  for (const auto& [key, stats] : cells) {
    if (key.bench == "kv") kv_curves.insert({key.shm, key.workload});
    if (key.bench == "storage") storage_curves.insert(key.workload);
  }
  if (kv_curves.empty() && storage_curves.empty()) return kConfigError;

  for (const auto& [shm, workload] : kv_curves) {
    std::string shm_label = shm == "-" ? "none" : shm;
    std::ofstream out(out_dir / ("kv_" + shm_label + "_" + workload + ".dat"), std::ios::binary);
    if (!out) return kIoError;
    out << "# rate_ops_s  achieved_ops_s  median_us  p95_us\n";
    for (const auto& [key, stats] : cells) {
      if (key.bench != "kv" || key.shm != shm || key.workload != workload) continue;
      out << key.rate_or_size << "  " << stats.throughput_ops << "  "
          << static_cast<double>(stats.median_ns) / 1e3 << "  "
          << static_cast<double>(stats.p95_ns) / 1e3 << "\n";
    }
  }

  for (const std::string& command : storage_curves) {
    std::ofstream out(out_dir / ("storage_" + command + ".dat"), std::ios::binary);
    if (!out) return kIoError;
    out << "# size_bytes  mean_time_ms  throughput_mib_s\n";
    for (const auto& [key, stats] : cells) {
      if (key.bench != "storage" || key.workload != command) continue;
      double mean_ns = static_cast<double>(stats.total_ns) / static_cast<double>(stats.n);
      double mib_per_s =
          (static_cast<double>(key.rate_or_size) / (1024.0 * 1024.0)) / (mean_ns / 1e9);
      out << key.rate_or_size << "  " << mean_ns / 1e6 << "  " << mib_per_s << "\n";
    }
  }

  std::ofstream gp(out_dir / "plots.gp", std::ios::binary);
  if (!gp) return kIoError;
  gp << "# gnuplot script over the .dat files in this directory\n"
        "set logscale x\n"
        "set key outside\n"
        "set xlabel 'throughput [ops/s]'\n"
        "set ylabel 'median latency [us]'\n"
        "plot for [f in system('ls kv_*.dat')] f using 2:3 with linespoints title f\n"
        "pause -1\n"
        "set xlabel 'data size [bytes]'\n"
        "set ylabel 'execution time [ms]'\n"
        "plot for [f in system('ls storage_*.dat')] f using 1:2 with linespoints title f\n"
        "pause -1\n";
  return kSuccess;
}

}  // namespace

uint32_t EmitReport(const std::vector<CsvRow>& rows, ReportFormat format,
                    const std::filesystem::path& out_dir) {
  if (rows.empty()) return kConfigError;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return kIoError;
  switch (format) {
    case ReportFormat::kCsv:
      return EmitMergedCsv(rows, out_dir);
    case ReportFormat::kSummary:
      return EmitSummary(rows, out_dir);
    case ReportFormat::kGnuplot:
      return EmitGnuplot(rows, out_dir);
  }
  return kConfigError;
}

}  // namespace teekv::bench
