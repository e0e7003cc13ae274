// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_STATS_PTA_HPP_
#define TEEKV_STATS_PTA_HPP_

#include <functional>

#include "teekv/tee_core.hpp"

namespace teekv::pta {

// Boundary-statistics pseudo TA. Runs as a secure privileged service; has no
// access to the trusted-storage API.
//
//   kCmdBoundaryStats: p0 Value out = world switches (lo/hi),
//                      p1 Value out = supplicant RPCs (lo/hi).
//   kCmdKvCount:       p0 Value out = live KV-table entries (lo/hi).
inline constexpr uint32_t kCmdBoundaryStats = 0;
inline constexpr uint32_t kCmdKvCount = 1;

class StatsPta : public core::TrustedApp {
 public:
  StatsPta(core::TeeCore& core, std::function<uint64_t()> kv_count)
      : core_(core), kv_count_(std::move(kv_count)) {}

  uint32_t OnInvoke(core::TaServices& services, uint32_t command_id,
                    core::TaParams params) override;

 private:
  core::TeeCore& core_;
  std::function<uint64_t()> kv_count_;
};

}  // namespace teekv::pta

#endif  // TEEKV_STATS_PTA_HPP_
