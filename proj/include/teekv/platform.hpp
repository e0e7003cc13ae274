// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_PLATFORM_HPP_
#define TEEKV_PLATFORM_HPP_

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "teekv/gp_client.hpp"
#include "teekv/kv_ta.hpp"
#include "teekv/secure_storage.hpp"
#include "teekv/supplicant.hpp"
#include "teekv/tee_core.hpp"
#include "teekv/well_known.hpp"

namespace teekv {

struct PlatformConfig {
  std::filesystem::path store_root;  // required
  std::filesystem::path manifest_path;  // default: <store_root>/ta_manifest.txt
  std::string device_name = kDefaultDeviceName;
  std::optional<storage::Huk> huk;        // default: static fallback
  std::optional<uint64_t> storage_seed;   // default: OS entropy
  size_t shared_pool_size = 4 * 1024 * 1024;
  std::chrono::nanoseconds injected_latency{0};

  // Reads TEEKV_STORE_ROOT (default "./teekv-store") and TEEKV_HUK
  // (64 hex chars, or "static").
  static PlatformConfig FromEnvironment();
};

// One assembled emulated machine: supplicant + storage service + secure
// core with the stock TAs registered (KV TA, storage TA, stats pseudo TA),
// plus a client library with the endpoint registered under
// config.device_name. Writes a default TA manifest if none exists.
class Platform {
 public:
  explicit Platform(PlatformConfig config);

  gp::TeeClient& client() { return client_; }
  core::TeeCore& core() { return *core_; }
  supplicant::Supplicant& supplicant() { return *supplicant_; }
  storage::StorageService& storage() { return *storage_; }
  const PlatformConfig& config() const { return config_; }

  // Live entry count of the KV TA instance (0 until first load).
  uint64_t KvEntryCount() const;

 private:
  PlatformConfig config_;
  std::unique_ptr<supplicant::Supplicant> supplicant_;
  std::unique_ptr<storage::StorageService> storage_;
  std::unique_ptr<core::TeeCore> core_;
  std::shared_ptr<std::atomic<kv::KvTa*>> kv_slot_;
  gp::TeeClient client_;
};

}  // namespace teekv

#endif  // TEEKV_PLATFORM_HPP_
