// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/storage_ta.hpp"

#include <cstring>
#include <string>

#include "teekv/rng.hpp"
#include "teekv/secure_storage.hpp"

namespace teekv::storage_ta {

namespace {

// Per-size stream so different object sizes carry different data under one
// benchmark seed.
uint64_t StreamSeed(uint64_t seed, uint64_t size) {
  return seed ^ (size * 0x9E3779B97F4A7C15ull);
}

struct Request {
  uint64_t size = 0;
  uint32_t chunk = 0;
  uint64_t seed = 0;
  core::TaValue* counters = nullptr;
  core::TaMem* sink = nullptr;  // optional, READ only
};

uint32_t ParseRequest(core::TaParams params, Request* req) {
  core::TaValue* size_chunk = core::ValueAt(params, 0);
  core::TaValue* seed = core::ValueAt(params, 1);
  req->counters = core::ValueAt(params, 2);
  if (size_chunk == nullptr || seed == nullptr || req->counters == nullptr) {
    return kBadParameters;
  }
  if (params.size() > 4) return kBadParameters;
  if (params.size() == 4) {
    req->sink = core::MemAt(params, 3);
    if (req->sink == nullptr) return kBadParameters;
  }
  req->size = *size_chunk->a;
  req->chunk = *size_chunk->b;
  req->seed = (static_cast<uint64_t>(*seed->b) << 32) | *seed->a;
  if (req->size == 0 || req->size > storage::kObjectQuota) return kBadParameters;
  if (req->chunk == 0 || req->chunk > storage::kMaxChunkSize) return kBadParameters;
  return kSuccess;
}

class TaBuffer {
 public:
  TaBuffer(core::TaServices& services, size_t n)
      : services_(services), data_(static_cast<uint8_t*>(services.Alloc(n))), size_(n) {}
  ~TaBuffer() {
    if (data_ != nullptr) services_.Free(data_);
  }
  TaBuffer(const TaBuffer&) = delete;
  TaBuffer& operator=(const TaBuffer&) = delete;

  bool ok() const { return data_ != nullptr; }
  std::span<uint8_t> span() { return {data_, size_}; }

 private:
  core::TaServices& services_;
  uint8_t* data_;
  size_t size_;
};

void Report(const Request& req, uint64_t chunk_ops, uint32_t fnv) {
  *req.counters->a = static_cast<uint32_t>(chunk_ops);
  *req.counters->b = fnv;
}

uint32_t DoWrite(core::TaServices& services, const Request& req) {
  // Fresh object per run: drop a previous instance of this size if present.
  std::vector<uint8_t> id = ObjectIdForSize(req.size);
  if (auto existing = services.OpenObject(id); existing.ok()) {
    if (uint32_t code = existing.value().Remove(); code != kSuccess) return code;
  }

  TaBuffer data(services, req.size);
  if (!data.ok()) return kOutOfMemory;
  Rng rng(StreamSeed(req.seed, req.size));
  rng.Fill(data.span());

  auto created = services.CreateObject(id, {});
  if (!created.ok()) return created.code();
  storage::PersistentObject obj = created.take();

  uint64_t chunk_ops = 0;
  for (size_t at = 0; at < req.size; at += req.chunk) {
    size_t n = std::min<size_t>(req.chunk, req.size - at);
    if (uint32_t code = obj.WriteChunk(data.span().subspan(at, n)); code != kSuccess) {
      return code;
    }
    ++chunk_ops;
  }
  Report(req, chunk_ops, Fnv1a32(data.span()));
  return kSuccess;
}

uint32_t DoRead(core::TaServices& services, const Request& req) {
  auto opened = services.OpenObject(ObjectIdForSize(req.size));
  if (!opened.ok()) return opened.code();
  storage::PersistentObject obj = opened.take();
  if (obj.size() != req.size) return kCorruptObject;

  TaBuffer expected(services, req.chunk);
  if (!expected.ok()) return kOutOfMemory;
  Rng rng(StreamSeed(req.seed, req.size));

  uint64_t chunk_ops = 0;
  uint32_t fnv = 2166136261u;
  size_t copied = 0;
  while (obj.cursor() < obj.size()) {
    auto chunk = obj.ReadChunk(req.chunk);
    if (!chunk.ok()) return chunk.code();
    ++chunk_ops;

    std::span<uint8_t> want = expected.span().subspan(0, chunk.value().size());
    rng.Fill(want);
    if (!std::equal(chunk.value().begin(), chunk.value().end(), want.begin())) {
      return kCorruptObject;
    }
    fnv = Fnv1a32(chunk.value(), fnv);
    if (req.sink != nullptr && copied + chunk.value().size() <= req.sink->bytes.size()) {
      std::memcpy(req.sink->bytes.data() + copied, chunk.value().data(), chunk.value().size());
      copied += chunk.value().size();
    }
  }
  Report(req, chunk_ops, fnv);
  return kSuccess;
}

uint32_t DoRewrite(core::TaServices& services, const Request& req) {
  auto opened = services.OpenObject(ObjectIdForSize(req.size));
  if (!opened.ok()) return opened.code();
  storage::PersistentObject obj = opened.take();
  if (obj.size() != req.size) return kCorruptObject;

  TaBuffer data(services, req.size);
  if (!data.ok()) return kOutOfMemory;

  uint64_t chunk_ops = 0;
  uint32_t fnv = 2166136261u;
  size_t at = 0;
  while (obj.cursor() < obj.size()) {
    auto chunk = obj.ReadChunk(req.chunk);
    if (!chunk.ok()) return chunk.code();
    ++chunk_ops;
    std::memcpy(data.span().data() + at, chunk.value().data(), chunk.value().size());
    at += chunk.value().size();
  }
  fnv = Fnv1a32(data.span(), fnv);

  if (uint32_t code = obj.Seek(0); code != kSuccess) return code;
  for (size_t out = 0; out < req.size; out += req.chunk) {
    size_t n = std::min<size_t>(req.chunk, req.size - out);
    if (uint32_t code = obj.WriteChunk(data.span().subspan(out, n)); code != kSuccess) {
      return code;
    }
    ++chunk_ops;
  }
  fnv = Fnv1a32(data.span(), fnv);
  Report(req, chunk_ops, fnv);
  return kSuccess;
}

}  // namespace

std::vector<uint8_t> ObjectIdForSize(uint64_t size) {
  std::string text = "ss-" + std::to_string(size);
  return {text.begin(), text.end()};
}

uint32_t Fnv1a32(std::span<const uint8_t> bytes, uint32_t seed) {
  uint32_t h = seed;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 16777619u;
  }
  return h;
}

uint32_t StorageTa::OnInvoke(core::TaServices& services, uint32_t command_id,
                             core::TaParams params) {
  Request req;
  if (uint32_t code = ParseRequest(params, &req); code != kSuccess) return code;
  switch (command_id) {
    case kCmdWrite:
      return DoWrite(services, req);
    case kCmdRead:
      return DoRead(services, req);
    case kCmdRewrite:
      return DoRewrite(services, req);
    default:
      return kBadParameters;
  }
}

}  // namespace teekv::storage_ta
