// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_REFERENCE_KV_HPP_
#define TEEKV_REFERENCE_KV_HPP_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "teekv/codes.hpp"
#include "teekv/kv_ta.hpp"
#include "teekv/result.hpp"

namespace teekv::kv {

// Plain normal-world associative map with the same observable contract as
// the KV TA: value-size bounds, overwrite semantics, return codes and the
// 1 MiB accounting boundary (alloc-first, so replacing an entry still
// charges the new entry before the old one is released). Serves as the
// ree-direct baseline and as the model for boundary-equivalence checks.
class ReferenceKv {
 public:
  explicit ReferenceKv(size_t memory_limit = core::kDefaultTaMemoryLimit)
      : limit_(memory_limit) {}

  uint32_t Put(uint64_t key, std::span<const uint8_t> value);
  Result<std::vector<uint8_t>> Get(uint64_t key) const;
  uint32_t Del(uint64_t key);
  void Clear();

  uint64_t size() const { return map_.size(); }
  size_t heap_used() const { return used_; }

 private:
  size_t limit_;
  size_t used_ = 0;
  std::unordered_map<uint64_t, std::vector<uint8_t>> map_;
};

}  // namespace teekv::kv

#endif  // TEEKV_REFERENCE_KV_HPP_
