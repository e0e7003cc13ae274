// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_KV_TA_HPP_
#define TEEKV_KV_TA_HPP_

#include <array>
#include <atomic>
#include <cstdint>
#include <vector>

#include "teekv/tee_core.hpp"

namespace teekv::kv {

// The key-value trusted application: a static separate-chaining hash table
// with modular hashing over 251 chains. Keys are 64-bit; values are byte
// strings of 1..4096 bytes, copied out of shared memory into the TA heap.

inline constexpr size_t kChainCount = 251;
inline constexpr size_t kMaxValueSize = 4096;

// Command ABI. Keys travel as one Value parameter (a = low 32 bits,
// b = high 32 bits).
//
//   kCmdPut:   p0 Value key; p1 MemRef in = value bytes.
//   kCmdGet:   p0 Value key, b set to the value length on return (or the
//              required length on kShortBuffer); p1 MemRef out.
//   kCmdDel:   p0 Value key.
//   kCmdClear: no parameters; frees every entry.
//
// Whole-region carrier form for PUT/GET: when p2 (Value) is present the
// memref spans an entire shared region and the chunk lives at offset = key;
// for PUT, p2.a is the chunk length. GET then writes the value back at the
// same offset.
inline constexpr uint32_t kCmdPut = 0;
inline constexpr uint32_t kCmdGet = 1;
inline constexpr uint32_t kCmdDel = 2;
inline constexpr uint32_t kCmdClear = 3;

inline constexpr size_t HashIndex(uint64_t key) { return key % kChainCount; }

class KvTa : public core::TrustedApp {
 public:
  KvTa() = default;

  uint32_t OnInvoke(core::TaServices& services, uint32_t command_id,
                    core::TaParams params) override;
  void OnDestroy(core::TaServices& services) override;

  uint64_t size() const { return count_.load(); }

  // Debug view for placement checks: keys currently stored in one chain.
  std::vector<uint64_t> ChainKeys(size_t chain) const;

  // Heap bytes accounted per entry in addition to the value bytes.
  static constexpr size_t kEntryOverhead = 32;

 private:
  struct Node {
    uint64_t key;
    Node* next;
    uint8_t* data;
    uint32_t len;
  };
  static_assert(sizeof(Node) == kEntryOverhead);

  Node* Find(uint64_t key, Node*** prev_link);

  uint32_t DoPut(core::TaServices& services, core::TaParams params);
  uint32_t DoGet(core::TaServices& services, core::TaParams params);
  uint32_t DoDel(core::TaServices& services, core::TaParams params);
  uint32_t DoClear(core::TaServices& services);

  // The chain array is part of the TA's static footprint; only entries are
  // charged against the heap limit.
  std::array<Node*, kChainCount> chains_{};
  std::atomic<uint64_t> count_{0};
};

}  // namespace teekv::kv

#endif  // TEEKV_KV_TA_HPP_
