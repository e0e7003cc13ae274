// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/bench.hpp"

#include <chrono>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "teekv/storage_ta.hpp"

namespace teekv::bench {

namespace {

using Clock = std::chrono::steady_clock;

uint64_t ElapsedNs(Clock::time_point t0, Clock::time_point t1) {
  return static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

}  // namespace

std::string_view WorkloadName(Workload w) {
  switch (w) {
    case Workload::kPut:
      return "put";
    case Workload::kGet:
      return "get";
    case Workload::kDel:
      return "del";
    case Workload::kMix20:
      return "mix20";
    case Workload::kMix50:
      return "mix50";
  }
  return "?";
}

std::string_view ShmModeName(ShmMode m) {
  switch (m) {
    case ShmMode::kWhole:
      return "whole";
    case ShmMode::kPartial:
      return "partial";
    case ShmMode::kTemporary:
      return "temporary";
    case ShmMode::kReeDirect:
      return "ree";
  }
  return "?";
}

std::string_view OpKindName(OpKind k) {
  switch (k) {
    case OpKind::kPut:
      return "PUT";
    case OpKind::kGet:
      return "GET";
    case OpKind::kDel:
      return "DEL";
  }
  return "?";
}

std::optional<Workload> ParseWorkload(std::string_view s) {
  if (s == "put") return Workload::kPut;
  if (s == "get") return Workload::kGet;
  if (s == "del") return Workload::kDel;
  if (s == "mix20") return Workload::kMix20;
  if (s == "mix50") return Workload::kMix50;
  return std::nullopt;
}

std::optional<ShmMode> ParseShmMode(std::string_view s) {
  if (s == "whole") return ShmMode::kWhole;
  if (s == "partial") return ShmMode::kPartial;
  if (s == "temporary") return ShmMode::kTemporary;
  if (s == "ree" || s == "ree_direct") return ShmMode::kReeDirect;
  return std::nullopt;
}

WorkloadMix MixFor(Workload w) {
  switch (w) {
    case Workload::kPut:
      return {100, 0, 0, 0};
    case Workload::kGet:
      return {0, 100, 0, 256};
    case Workload::kDel:
      return {0, 0, 100, 256};
    case Workload::kMix20:
      return {20, 80, 0, 204};  // floor(256 * 0.8)
    case Workload::kMix50:
      return {50, 50, 0, 128};  // floor(256 * 0.5)
  }
  return {};
}

std::vector<uint64_t> DefaultRates() {
  std::vector<uint64_t> rates;
  for (uint64_t r = 1; r <= 32768; r *= 2) rates.push_back(r);
  return rates;
}

std::vector<uint64_t> DefaultSizes() {
  std::vector<uint64_t> sizes;
  for (uint64_t s = 256; s <= 1048576; s *= 2) sizes.push_back(s);
  return sizes;
}

uint64_t VirtualIssueNs(uint64_t index, uint64_t rate) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(index) * 1000000000u) / rate);
}

WorkloadStream::WorkloadStream(uint64_t seed, const WorkloadMix& mix, size_t region_size,
                               size_t chunk)
    : rng_(seed), mix_(mix), region_size_(region_size), chunk_(chunk) {
  mixed_ = (mix.put_pct != 100) && (mix.get_pct != 100) && (mix.del_pct != 100);

  region_.resize(region_size_);
  rng_.Fill(region_);

  std::unordered_set<uint64_t> seen;
  prepopulate_keys_.reserve(mix.prepopulate);
  while (prepopulate_keys_.size() < static_cast<size_t>(mix.prepopulate)) {
    uint64_t key = rng_.Below(region_size_ - chunk_ + 1);
    if (seen.insert(key).second) prepopulate_keys_.push_back(key);
  }
}

WorkloadStream::Op WorkloadStream::Next() {
  OpKind kind;
  if (!mixed_) {
    kind = mix_.put_pct == 100 ? OpKind::kPut
           : mix_.get_pct == 100 ? OpKind::kGet
                                  : OpKind::kDel;
  } else {
    uint64_t draw = rng_.Below(100);
    if (draw < static_cast<uint64_t>(mix_.put_pct)) {
      kind = OpKind::kPut;
    } else if (draw < static_cast<uint64_t>(mix_.put_pct + mix_.get_pct)) {
      kind = OpKind::kGet;
    } else {
      kind = OpKind::kDel;
    }
  }
  uint64_t key = rng_.Below(region_size_ - chunk_ + 1);
  return {kind, key};
}

KvHarness::KvHarness(Platform& platform, ShmMode mode, size_t region_size, size_t chunk)
    : platform_(platform), mode_(mode), region_size_(region_size), chunk_(chunk) {
  auto ctx = platform_.client().InitializeContext(platform_.config().device_name);
  if (!ctx.ok()) throw std::runtime_error("KvHarness: no TEE endpoint");
  ctx_ = ctx.take();
  auto session = platform_.client().OpenSession(ctx_, kKvTaUuid);
  if (!session.ok()) throw std::runtime_error("KvHarness: cannot open KV session");
  session_ = session.take();

  switch (mode_) {
    case ShmMode::kWhole:
    case ShmMode::kPartial: {
      auto region = platform_.client().SetupSharedMemory(ctx_, region_size_, gp::ShmKind::kWhole);
      if (!region.ok()) throw std::runtime_error("KvHarness: shared pool exhausted");
      region_ = region.take();
      break;
    }
    case ShmMode::kTemporary:
      temp_buffer_.resize(region_size_);
      break;
    case ShmMode::kReeDirect:
      break;  // not driven through the harness
  }
  Clear();
}

KvHarness::~KvHarness() {
  platform_.client().CloseSession(session_);
  platform_.client().FinalizeContext(ctx_);
}

void KvHarness::LoadRegion(std::span<const uint8_t> bytes) {
  if (mode_ == ShmMode::kTemporary) {
    std::copy(bytes.begin(), bytes.end(), temp_buffer_.begin());
    return;
  }
  auto view = platform_.client().RegionBytes(region_);
  std::copy(bytes.begin(), bytes.end(), view.value().begin());
}

uint32_t KvHarness::Clear() {
  gp::Operation op;
  op.command_id = kv::kCmdClear;
  return platform_.client().InvokeCommand(session_, op);
}

KvHarness::OpResult KvHarness::Invoke(OpKind kind, uint64_t key) {
  gp::Operation op;
  op.params.push_back(gp::ValueParam{static_cast<uint32_t>(key),
                                     static_cast<uint32_t>(key >> 32)});

  gp::ShmHandle region = region_;
  if (mode_ == ShmMode::kTemporary && kind != OpKind::kDel) {
    // A temporary registration is spent by one invoke; registering it anew
    // is part of every op, mirroring per-call temporary references.
    auto temp = platform_.client().SetupSharedMemory(ctx_, temp_buffer_.size(),
                                                     gp::ShmKind::kTemporary, temp_buffer_);
    if (!temp.ok()) return {temp.code(), 0};
    region = temp.value();
  }

  switch (kind) {
    case OpKind::kPut:
      if (mode_ == ShmMode::kWhole) {
        op.command_id = kv::kCmdPut;
        op.params.push_back(gp::MemRefParam{region, 0, region_size_, gp::MemDirection::kIn});
        op.params.push_back(gp::ValueParam{static_cast<uint32_t>(chunk_), 0});
      } else {
        op.command_id = kv::kCmdPut;
        op.params.push_back(
            gp::MemRefParam{region, static_cast<size_t>(key), chunk_, gp::MemDirection::kIn});
      }
      break;
    case OpKind::kGet:
      if (mode_ == ShmMode::kWhole) {
        op.command_id = kv::kCmdGet;
        op.params.push_back(gp::MemRefParam{region, 0, region_size_, gp::MemDirection::kOut});
        op.params.push_back(gp::ValueParam{0, 0});
      } else {
        op.command_id = kv::kCmdGet;
        op.params.push_back(
            gp::MemRefParam{region, static_cast<size_t>(key), chunk_, gp::MemDirection::kOut});
      }
      break;
    case OpKind::kDel:
      op.command_id = kv::kCmdDel;
      break;
  }

  uint32_t code = platform_.client().InvokeCommand(session_, op);
  uint32_t value_len = std::get<gp::ValueParam>(op.params[0]).b;
  return {code, code == kSuccess || code == kShortBuffer ? value_len : 0};
}

KvHarness::OpResult KvHarness::Put(uint64_t key) { return Invoke(OpKind::kPut, key); }
KvHarness::OpResult KvHarness::Get(uint64_t key) { return Invoke(OpKind::kGet, key); }
KvHarness::OpResult KvHarness::Del(uint64_t key) { return Invoke(OpKind::kDel, key); }

std::vector<uint8_t> KvHarness::Peek(uint64_t offset, size_t len) {
  if (mode_ == ShmMode::kTemporary) {
    return {temp_buffer_.begin() + offset, temp_buffer_.begin() + offset + len};
  }
  auto view = platform_.client().RegionBytes(region_);
  auto bytes = view.value().subspan(offset, len);
  return {bytes.begin(), bytes.end()};
}

namespace {

uint32_t ValidateKvConfig(const KvBenchConfig& cfg) {
  if (cfg.chunk == 0 || cfg.chunk > cfg.region_size) return kConfigError;
  if (cfg.region_size == 0 || cfg.ops <= 0) return kConfigError;
  return kSuccess;
}

// One (workload, shm, rate) cell: fresh table, pre-populated per the
// workload, then cfg.ops operations paced on the virtual clock (or the wall
// clock with real_time) with each op's service time taken on the monotonic
// clock.
void RunKvCell(Platform& platform, const KvBenchConfig& cfg, uint64_t rate,
               std::vector<Sample>& out) {
  WorkloadMix mix = MixFor(cfg.workload);
  WorkloadStream stream(cfg.seed, mix, cfg.region_size, cfg.chunk);

  Sample base;
  base.bench = "kv";
  base.workload = std::string(WorkloadName(cfg.workload));
  base.shm = std::string(ShmModeName(cfg.shm));
  base.rate_or_size = rate;

  if (cfg.shm == ShmMode::kReeDirect) {
    kv::ReferenceKv model;
    const std::vector<uint8_t>& region = stream.region();
    for (uint64_t key : stream.prepopulate_keys()) {
      model.Put(key, std::span<const uint8_t>(region).subspan(key, cfg.chunk));
    }
    std::vector<uint8_t> fetched;
    Clock::time_point start = Clock::now();
    for (int i = 0; i < cfg.ops; ++i) {
      WorkloadStream::Op op = stream.Next();
      Sample s = base;
      s.issue_index = static_cast<uint64_t>(i);
      s.issue_virtual_ns = VirtualIssueNs(s.issue_index, rate);
      s.op = std::string(OpKindName(op.kind));
      if (cfg.real_time) {
        std::this_thread::sleep_until(start + std::chrono::nanoseconds(s.issue_virtual_ns));
      }
      Clock::time_point t0 = Clock::now();
      switch (op.kind) {
        case OpKind::kPut:
          s.code = model.Put(op.key, std::span<const uint8_t>(region).subspan(op.key, cfg.chunk));
          break;
        case OpKind::kGet: {
          auto got = model.Get(op.key);
          s.code = got.code();
          if (got.ok()) fetched = got.take();
          break;
        }
        case OpKind::kDel:
          s.code = model.Del(op.key);
          break;
      }
      s.service_ns = ElapsedNs(t0, Clock::now());
      out.push_back(std::move(s));
    }
    return;
  }

  KvHarness harness(platform, cfg.shm, cfg.region_size, cfg.chunk);
  harness.LoadRegion(stream.region());
  for (uint64_t key : stream.prepopulate_keys()) harness.Put(key);

  Clock::time_point start = Clock::now();
  for (int i = 0; i < cfg.ops; ++i) {
    WorkloadStream::Op op = stream.Next();
    Sample s = base;
    s.issue_index = static_cast<uint64_t>(i);
    s.issue_virtual_ns = VirtualIssueNs(s.issue_index, rate);
    s.op = std::string(OpKindName(op.kind));
    if (cfg.real_time) {
      std::this_thread::sleep_until(start + std::chrono::nanoseconds(s.issue_virtual_ns));
    }
    Clock::time_point t0 = Clock::now();
    KvHarness::OpResult result = harness.RunOp(op.kind, op.key);
    s.service_ns = ElapsedNs(t0, Clock::now());
    s.code = result.code;
    out.push_back(std::move(s));
  }
}

}  // namespace

Result<std::vector<Sample>> RunKvBench(Platform& platform, const KvBenchConfig& cfg) {
  using R = Result<std::vector<Sample>>;
  if (uint32_t code = ValidateKvConfig(cfg); code != kSuccess) return R::Error(code);

  std::vector<uint64_t> rates = cfg.rates.empty() ? DefaultRates() : cfg.rates;
  for (uint64_t rate : rates) {
    if (rate == 0) return R::Error(kConfigError);
  }

  std::vector<Sample> samples;
  samples.reserve(rates.size() * static_cast<size_t>(cfg.ops));
  for (uint64_t rate : rates) RunKvCell(platform, cfg, rate, samples);
  return samples;
}

Result<std::vector<Sample>> RunStorageBench(Platform& platform, const StorageBenchConfig& cfg) {
  using R = Result<std::vector<Sample>>;
  if (cfg.chunk == 0 || cfg.chunk > storage::kMaxChunkSize) return R::Error(kConfigError);
  if (cfg.repetitions <= 0) return R::Error(kConfigError);
  std::vector<uint64_t> sizes = cfg.sizes.empty() ? DefaultSizes() : cfg.sizes;
  for (uint64_t size : sizes) {
    if (size == 0 || size > storage::kObjectQuota) return R::Error(kConfigError);
  }

  auto ctx = platform.client().InitializeContext(platform.config().device_name);
  if (!ctx.ok()) return R::Error(ctx.code());
  auto session = platform.client().OpenSession(ctx.value(), kStorageTaUuid);
  if (!session.ok()) {
    platform.client().FinalizeContext(ctx.value());
    return R::Error(session.code());
  }

  static constexpr struct {
    uint32_t command;
    const char* name;
    const char* lower;
  } kCommands[] = {{storage_ta::kCmdWrite, "WRITE", "write"},
                   {storage_ta::kCmdRead, "READ", "read"},
                   {storage_ta::kCmdRewrite, "REWRITE", "rewrite"}};

  std::vector<Sample> samples;
  for (uint64_t size : sizes) {
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      for (const auto& cmd : kCommands) {
        gp::Operation op;
        op.command_id = cmd.command;
        op.params.push_back(gp::ValueParam{static_cast<uint32_t>(size),
                                           static_cast<uint32_t>(cfg.chunk)});
        op.params.push_back(gp::ValueParam{static_cast<uint32_t>(cfg.seed),
                                           static_cast<uint32_t>(cfg.seed >> 32)});
        op.params.push_back(gp::ValueParam{0, 0});

        Clock::time_point t0 = Clock::now();
        uint32_t code = platform.client().InvokeCommand(session.value(), op);
        uint64_t service_ns = ElapsedNs(t0, Clock::now());

        Sample s;
        s.bench = "storage";
        s.workload = cmd.lower;
        s.shm = "-";
        s.rate_or_size = size;
        s.op = cmd.name;
        s.service_ns = service_ns;
        s.issue_index = static_cast<uint64_t>(rep);
        s.code = code;
        s.chunk_ops = std::get<gp::ValueParam>(op.params[2]).a;
        samples.push_back(std::move(s));
      }
    }
  }

  platform.client().CloseSession(session.value());
  platform.client().FinalizeContext(ctx.value());
  return samples;
}

}  // namespace teekv::bench
