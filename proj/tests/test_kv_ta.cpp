// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unordered_map>

#include "support/temp_dir.hpp"
#include "teekv/kv_ta.hpp"
#include "teekv/reference_kv.hpp"
#include "teekv/rng.hpp"
#include "teekv/well_known.hpp"

using namespace teekv;
using namespace teekv::kv;
using core::MemDirection;
using core::TaMem;
using core::TaParam;
using core::TaParams;
using core::TaValue;

namespace {

// Drives the TA's entry points directly with a standalone heap: the command
// ABI below the client layer.
struct KvDriver {
  core::TaHeap heap{core::kDefaultTaMemoryLimit};
  KvTa ta;
  core::TaServices services{kKvTaUuid, TaKind::kUser, heap, nullptr};

  uint32_t Put(uint64_t key, std::span<uint8_t> value) {
    uint32_t a = static_cast<uint32_t>(key), b = static_cast<uint32_t>(key >> 32);
    TaParam params[] = {TaValue{&a, &b}, TaMem{value, MemDirection::kIn}};
    return ta.OnInvoke(services, kCmdPut, TaParams(params, 2));
  }

  uint32_t Get(uint64_t key, std::span<uint8_t> out, uint32_t* reported_len = nullptr) {
    uint32_t a = static_cast<uint32_t>(key), b = static_cast<uint32_t>(key >> 32);
    TaParam params[] = {TaValue{&a, &b}, TaMem{out, MemDirection::kOut}};
    uint32_t code = ta.OnInvoke(services, kCmdGet, TaParams(params, 2));
    if (reported_len != nullptr) *reported_len = b;
    return code;
  }

  uint32_t Del(uint64_t key) {
    uint32_t a = static_cast<uint32_t>(key), b = static_cast<uint32_t>(key >> 32);
    TaParam params[] = {TaValue{&a, &b}};
    return ta.OnInvoke(services, kCmdDel, TaParams(params, 1));
  }

  uint32_t Clear() { return ta.OnInvoke(services, kCmdClear, {}); }
};

// Chain index recomputed by base-256 digit reduction, independent of the
// 64-bit modulo the implementation uses.
size_t DigitModChainIndex(uint64_t key) {
  unsigned acc = 0;
  unsigned power = 1;  // 256^i mod 251
  for (int i = 0; i < 8; ++i) {
    unsigned digit = static_cast<unsigned>((key >> (8 * i)) & 0xFF);
    acc = (acc + digit % 251 * power) % 251;
    power = power * 256 % 251;
  }
  return acc;
}

std::vector<uint8_t> RandomValue(Rng& rng, size_t len) {
  std::vector<uint8_t> v(len);
  rng.Fill(v);
  return v;
}

}  // namespace

TEST_CASE("hash index is key mod 251") {
  CHECK(HashIndex(0) == 0);
  CHECK(HashIndex(251) == 0);
  CHECK(HashIndex(252) == 1);
  CHECK(HashIndex(502) == 0);  // collides with 251 in chain 0
  CHECK(HashIndex(524287) == 199);

  Rng rng(31337);
  for (int i = 0; i < 10000; ++i) {
    uint64_t key = rng.Next();
    CHECK(HashIndex(key) == DigitModChainIndex(key));
  }
}

TEST_CASE("put/get round trip and value length reporting") {
  KvDriver kv;
  Rng rng(1);
  std::vector<uint8_t> value = RandomValue(rng, 1024);

  CHECK(kv.Put(7, value) == kSuccess);
  CHECK(kv.ta.size() == 1);

  std::vector<uint8_t> out(1024, 0);
  uint32_t len = 0;
  CHECK(kv.Get(7, out, &len) == kSuccess);
  CHECK(len == 1024);
  CHECK(out == value);
}

TEST_CASE("get on an empty table misses") {
  KvDriver kv;
  std::vector<uint8_t> out(16);
  CHECK(kv.Get(1, out) == kItemNotFound);
}

TEST_CASE("put overwrites: second value wins, count stays 1") {
  KvDriver kv;
  Rng rng(2);
  std::vector<uint8_t> first = RandomValue(rng, 512);
  std::vector<uint8_t> second = RandomValue(rng, 300);

  CHECK(kv.Put(42, first) == kSuccess);
  CHECK(kv.Put(42, second) == kSuccess);
  CHECK(kv.ta.size() == 1);

  std::vector<uint8_t> out(1024);
  uint32_t len = 0;
  CHECK(kv.Get(42, out, &len) == kSuccess);
  CHECK(len == 300);
  CHECK(std::equal(second.begin(), second.end(), out.begin()));
}

TEST_CASE("short output buffers report the required length") {
  KvDriver kv;
  Rng rng(3);
  std::vector<uint8_t> value = RandomValue(rng, 1024);
  REQUIRE(kv.Put(9, value) == kSuccess);

  std::vector<uint8_t> small(512);
  uint32_t required = 0;
  CHECK(kv.Get(9, small, &required) == kShortBuffer);
  CHECK(required == 1024);
}

TEST_CASE("delete frees and is not idempotent") {
  KvDriver kv;
  Rng rng(4);
  std::vector<uint8_t> value = RandomValue(rng, 100);
  REQUIRE(kv.Put(5, value) == kSuccess);

  CHECK(kv.Del(5) == kSuccess);
  std::vector<uint8_t> out(128);
  CHECK(kv.Get(5, out) == kItemNotFound);
  CHECK(kv.Del(5) == kItemNotFound);
}

TEST_CASE("value size bounds") {
  KvDriver kv;
  std::vector<uint8_t> empty;
  CHECK(kv.Put(1, empty) == kBadParameters);

  std::vector<uint8_t> too_big(kMaxValueSize + 1, 1);
  CHECK(kv.Put(1, too_big) == kBadParameters);

  std::vector<uint8_t> max(kMaxValueSize, 1);
  CHECK(kv.Put(1, max) == kSuccess);
}

TEST_CASE("malformed parameter lists are rejected") {
  KvDriver kv;
  uint32_t a = 0, b = 0;
  std::vector<uint8_t> buf(16, 1);

  SUBCASE("put without a memref") {
    TaParam params[] = {TaValue{&a, &b}};
    CHECK(kv.ta.OnInvoke(kv.services, kCmdPut, TaParams(params, 1)) == kBadParameters);
  }
  SUBCASE("put with two values") {
    TaParam params[] = {TaValue{&a, &b}, TaValue{&a, &b}};
    CHECK(kv.ta.OnInvoke(kv.services, kCmdPut, TaParams(params, 2)) == kBadParameters);
  }
  SUBCASE("del with extra params") {
    TaParam params[] = {TaValue{&a, &b}, TaMem{buf, MemDirection::kIn}};
    CHECK(kv.ta.OnInvoke(kv.services, kCmdDel, TaParams(params, 2)) == kBadParameters);
  }
  SUBCASE("clear takes no params") {
    TaParam params[] = {TaValue{&a, &b}};
    CHECK(kv.ta.OnInvoke(kv.services, kCmdClear, TaParams(params, 1)) == kBadParameters);
  }
  SUBCASE("unknown command") {
    CHECK(kv.ta.OnInvoke(kv.services, 99, {}) == kBadParameters);
  }
}

TEST_CASE("whole-region carrier addresses chunks by key") {
  KvDriver kv;
  Rng rng(5);
  std::vector<uint8_t> region(8192);
  rng.Fill(region);
  const uint64_t key = 3000;
  const uint32_t chunk = 1024;

  uint32_t a = static_cast<uint32_t>(key), b = 0;
  uint32_t chunk_a = chunk, chunk_b = 0;
  TaParam put_params[] = {TaValue{&a, &b}, TaMem{region, MemDirection::kIn},
                          TaValue{&chunk_a, &chunk_b}};
  REQUIRE(kv.ta.OnInvoke(kv.services, kCmdPut, TaParams(put_params, 3)) == kSuccess);

  // GET writes the value back into the carrier at the same offset.
  std::vector<uint8_t> out_region(8192, 0);
  uint32_t ga = static_cast<uint32_t>(key), gb = 0;
  uint32_t marker_a = 0, marker_b = 0;
  TaParam get_params[] = {TaValue{&ga, &gb}, TaMem{out_region, MemDirection::kOut},
                          TaValue{&marker_a, &marker_b}};
  REQUIRE(kv.ta.OnInvoke(kv.services, kCmdGet, TaParams(get_params, 3)) == kSuccess);
  CHECK(gb == chunk);
  CHECK(std::equal(region.begin() + key, region.begin() + key + chunk,
                   out_region.begin() + key));

  SUBCASE("out-of-bounds carrier put") {
    uint32_t bad_a = static_cast<uint32_t>(region.size() - 100), bad_b = 0;
    TaParam params[] = {TaValue{&bad_a, &bad_b}, TaMem{region, MemDirection::kIn},
                        TaValue{&chunk_a, &chunk_b}};
    CHECK(kv.ta.OnInvoke(kv.services, kCmdPut, TaParams(params, 3)) == kBadParameters);
  }
}

TEST_CASE("capacity boundary sits exactly at the documented overhead") {
  KvDriver kv;
  Rng rng(6);
  std::vector<uint8_t> value = RandomValue(rng, 1024);

  // Each 1 KiB entry accounts 1024 + kEntryOverhead bytes.
  constexpr size_t kPerEntry = 1024 + KvTa::kEntryOverhead;
  constexpr size_t kFit = core::kDefaultTaMemoryLimit / kPerEntry;  // 992
  static_assert(kFit == 992);

  for (uint64_t key = 0; key < kFit; ++key) {
    REQUIRE(kv.Put(key, value) == kSuccess);
  }
  CHECK(kv.heap.used() == kFit * kPerEntry);
  CHECK(kv.Put(kFit, value) == kOutOfMemory);
  CHECK(kv.ta.size() == kFit);

  // Overwrites at the boundary are alloc-first: same-size replace is refused.
  CHECK(kv.Put(0, value) == kOutOfMemory);

  // After one delete there is room again.
  CHECK(kv.Del(0) == kSuccess);
  CHECK(kv.Put(kFit, value) == kSuccess);
}

TEST_CASE("memory neutrality: deleting everything restores the baseline") {
  KvDriver kv;
  Rng rng(7);
  size_t baseline = kv.heap.used();
  CHECK(baseline == 0);

  std::vector<uint64_t> keys;
  for (int i = 0; i < 256; ++i) {
    uint64_t key = rng.Below(1 << 20);
    std::vector<uint8_t> value = RandomValue(rng, 1 + rng.Below(2048));
    if (kv.Put(key, value) == kSuccess) keys.push_back(key);
  }
  CHECK(kv.heap.used() > 0);

  for (uint64_t key : keys) kv.Del(key);  // duplicates report ItemNotFound
  CHECK(kv.ta.size() == 0);
  CHECK(kv.heap.used() == baseline);
}

TEST_CASE("clear frees every entry") {
  KvDriver kv;
  Rng rng(8);
  for (uint64_t key = 0; key < 300; ++key) {
    std::vector<uint8_t> value = RandomValue(rng, 64);
    REQUIRE(kv.Put(key, value) == kSuccess);
  }
  CHECK(kv.ta.size() == 300);
  CHECK(kv.Clear() == kSuccess);
  CHECK(kv.ta.size() == 0);
  CHECK(kv.heap.used() == 0);
}

TEST_CASE("chain placement: every live entry is in chain key mod 251 only") {
  KvDriver kv;
  Rng rng(9);
  std::unordered_map<uint64_t, bool> live;
  for (int i = 0; i < 10000; ++i) {
    uint64_t key = rng.Below(4000);
    if (rng.Below(3) == 0) {
      uint32_t code = kv.Del(key);
      if (code == kSuccess) live[key] = false;
    } else {
      std::vector<uint8_t> value = RandomValue(rng, 1 + rng.Below(64));
      if (kv.Put(key, value) == kSuccess) live[key] = true;
    }
  }

  std::vector<std::vector<uint64_t>> chains(kChainCount);
  size_t total = 0;
  for (size_t c = 0; c < kChainCount; ++c) {
    chains[c] = kv.ta.ChainKeys(c);
    total += chains[c].size();
    for (uint64_t key : chains[c]) {
      CHECK(HashIndex(key) == c);
      CHECK(live[key]);
    }
  }
  CHECK(total == kv.ta.size());
  size_t expected_live = 0;
  for (const auto& [key, is_live] : live) expected_live += is_live ? 1 : 0;
  CHECK(total == expected_live);
}

TEST_CASE("random operation streams match the reference map") {
  KvDriver kv;
  ReferenceKv model;
  Rng rng(10);

  for (int i = 0; i < 10000; ++i) {
    uint64_t key = rng.Below(2000);
    uint64_t action = rng.Below(100);
    if (action < 45) {
      std::vector<uint8_t> value = RandomValue(rng, 1 + rng.Below(3000));
      CHECK(kv.Put(key, value) == model.Put(key, value));
    } else if (action < 80) {
      std::vector<uint8_t> out(4096);
      uint32_t len = 0;
      uint32_t code = kv.Get(key, out, &len);
      auto expected = model.Get(key);
      CHECK(code == expected.code());
      if (code == kSuccess) {
        CHECK(len == expected.value().size());
        CHECK(std::equal(expected.value().begin(), expected.value().end(), out.begin()));
      }
    } else {
      CHECK(kv.Del(key) == model.Del(key));
    }
    CHECK(kv.ta.size() == model.size());
    CHECK(kv.heap.used() == model.heap_used());
  }
}
