// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_BENCH_HPP_
#define TEEKV_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "teekv/platform.hpp"
#include "teekv/reference_kv.hpp"
#include "teekv/result.hpp"
#include "teekv/rng.hpp"

namespace teekv::bench {

enum class Workload { kPut, kGet, kDel, kMix20, kMix50 };
enum class ShmMode { kWhole, kPartial, kTemporary, kReeDirect };
enum class OpKind { kPut, kGet, kDel };

std::string_view WorkloadName(Workload w);
std::string_view ShmModeName(ShmMode m);
std::string_view OpKindName(OpKind k);
std::optional<Workload> ParseWorkload(std::string_view s);
std::optional<ShmMode> ParseShmMode(std::string_view s);

// Operation shares and starting table population for one workload. The
// table is pre-populated with floor(256 * GET share) entries for the mixed
// workloads and 256 for GET/DEL.
struct WorkloadMix {
  int put_pct = 0;
  int get_pct = 0;
  int del_pct = 0;
  int prepopulate = 0;
};
WorkloadMix MixFor(Workload w);

// Deterministic operation stream for one benchmark cell. Draw order is
// fixed: region fill, then pre-population keys (distinct; duplicates are
// redrawn so the starting count is exact), then per operation a kind draw
// (mixed workloads only) followed by an offset draw. Offsets are uniform
// over [0, region_size - chunk] and double as keys.
class WorkloadStream {
 public:
  WorkloadStream(uint64_t seed, const WorkloadMix& mix, size_t region_size, size_t chunk);

  const std::vector<uint8_t>& region() const { return region_; }
  const std::vector<uint64_t>& prepopulate_keys() const { return prepopulate_keys_; }

  struct Op {
    OpKind kind;
    uint64_t key;
  };
  Op Next();

 private:
  Rng rng_;
  WorkloadMix mix_;
  size_t region_size_;
  size_t chunk_;
  std::vector<uint8_t> region_;
  std::vector<uint64_t> prepopulate_keys_;
  bool mixed_;
};

struct KvBenchConfig {
  Workload workload = Workload::kPut;
  ShmMode shm = ShmMode::kWhole;
  size_t region_size = 512 * 1024;
  size_t chunk = 1024;
  int ops = 256;
  std::vector<uint64_t> rates;  // ops/second; empty means DefaultRates()
  uint64_t seed = 0;
  bool real_time = false;  // pace on the wall clock instead of the virtual one
};

struct StorageBenchConfig {
  std::vector<uint64_t> sizes;  // bytes; empty means DefaultSizes()
  size_t chunk = 1024;
  int repetitions = 10;
  uint64_t seed = 0;
};

std::vector<uint64_t> DefaultRates();  // powers of two, 1..32768
std::vector<uint64_t> DefaultSizes();  // powers of two, 256..1048576

struct Sample {
  std::string bench;     // "kv" | "storage"
  std::string workload;  // workload or storage command, lowercase
  std::string shm;       // shm mode, "-" for storage
  uint64_t rate_or_size = 0;
  std::string op;  // op kind, uppercase
  uint64_t service_ns = 0;

  // Not part of the CSV schema.
  uint64_t issue_index = 0;
  uint64_t issue_virtual_ns = 0;
  uint32_t code = 0;
  uint64_t chunk_ops = 0;
};

// Exact virtual clock: op i in a cell paced at `rate` is issued at the
// rational instant i/rate seconds, rendered as floor-nanoseconds.
uint64_t VirtualIssueNs(uint64_t index, uint64_t rate);

// Drives the KV TA through the full client boundary in one shared-memory
// mode. whole: one region, whole-region memrefs, the TA indexes chunks by
// key. partial: one region, (offset=key, length=chunk) references.
// temporary: a client-owned buffer registered anew for every call (the
// registration is part of the op, and of its service time).
class KvHarness {
 public:
  KvHarness(Platform& platform, ShmMode mode, size_t region_size, size_t chunk);
  ~KvHarness();

  KvHarness(const KvHarness&) = delete;
  KvHarness& operator=(const KvHarness&) = delete;

  // Copies bytes into the shared region / client buffer.
  void LoadRegion(std::span<const uint8_t> bytes);

  struct OpResult {
    uint32_t code = 0;
    uint32_t value_len = 0;
  };

  OpResult Put(uint64_t key);  // value = buffer[key, key+chunk)
  OpResult Get(uint64_t key);  // on success the value lands at buffer[key, ...)
  OpResult Del(uint64_t key);
  uint32_t Clear();

  OpResult RunOp(OpKind kind, uint64_t key) {
    switch (kind) {
      case OpKind::kPut:
        return Put(key);
      case OpKind::kGet:
        return Get(key);
      case OpKind::kDel:
        return Del(key);
    }
    return {kBadParameters, 0};
  }

  // Bytes at [offset, offset+len) of the region/buffer the ops act on.
  std::vector<uint8_t> Peek(uint64_t offset, size_t len);

  gp::SessionHandle session() const { return session_; }

 private:
  OpResult Invoke(OpKind kind, uint64_t key);

  Platform& platform_;
  ShmMode mode_;
  size_t region_size_;
  size_t chunk_;
  gp::ContextHandle ctx_;
  gp::SessionHandle session_;
  gp::ShmHandle region_;               // whole/partial
  std::vector<uint8_t> temp_buffer_;   // temporary
};

Result<std::vector<Sample>> RunKvBench(Platform& platform, const KvBenchConfig& cfg);
Result<std::vector<Sample>> RunStorageBench(Platform& platform, const StorageBenchConfig& cfg);

}  // namespace teekv::bench

#endif  // TEEKV_BENCH_HPP_
