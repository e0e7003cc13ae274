// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/stats_pta.hpp"

namespace teekv::pta {

namespace {

void StoreU64(core::TaValue* v, uint64_t value) {
  *v->a = static_cast<uint32_t>(value);
  *v->b = static_cast<uint32_t>(value >> 32);
}

}  // namespace

uint32_t StatsPta::OnInvoke(core::TaServices&, uint32_t command_id, core::TaParams params) {
  switch (command_id) {
    case kCmdBoundaryStats: {
      core::TaValue* switches = core::ValueAt(params, 0);
      core::TaValue* rpcs = core::ValueAt(params, 1);
      if (switches == nullptr || rpcs == nullptr) return kBadParameters;
      core::BoundaryStats stats = core_.ReadStats();
      StoreU64(switches, stats.world_switches);
      StoreU64(rpcs, stats.supplicant_rpcs);
      return kSuccess;
    }
    case kCmdKvCount: {
      core::TaValue* count = core::ValueAt(params, 0);
      if (count == nullptr) return kBadParameters;
      StoreU64(count, kv_count_ ? kv_count_() : 0);
      return kSuccess;
    }
    default:
      return kBadParameters;
  }
}

}  // namespace teekv::pta
