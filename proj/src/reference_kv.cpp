// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/reference_kv.hpp"

namespace teekv::kv {

uint32_t ReferenceKv::Put(uint64_t key, std::span<const uint8_t> value) {
  if (value.empty() || value.size() > kMaxValueSize) return kBadParameters;
  // Alloc-first, mirroring the TA: the new entry is charged before any old
  // one is released.
  size_t incoming = KvTa::kEntryOverhead + value.size();
  if (used_ + incoming > limit_) return kOutOfMemory;

  auto it = map_.find(key);
  if (it != map_.end()) {
    used_ -= KvTa::kEntryOverhead + it->second.size();
    it->second.assign(value.begin(), value.end());
  } else {
    map_.emplace(key, std::vector<uint8_t>(value.begin(), value.end()));
  }
  used_ += incoming;
  return kSuccess;
}

Result<std::vector<uint8_t>> ReferenceKv::Get(uint64_t key) const {
  auto it = map_.find(key);
  if (it == map_.end()) return Result<std::vector<uint8_t>>::Error(kItemNotFound);
  return it->second;
}

uint32_t ReferenceKv::Del(uint64_t key) {
  auto it = map_.find(key);
  if (it == map_.end()) return kItemNotFound;
  used_ -= KvTa::kEntryOverhead + it->second.size();
  map_.erase(it);
  return kSuccess;
}

void ReferenceKv::Clear() {
  map_.clear();
  used_ = 0;
}

}  // namespace teekv::kv
