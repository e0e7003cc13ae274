// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/platform.hpp"

#include <cstdlib>
#include <fstream>

#include "teekv/stats_pta.hpp"
#include "teekv/storage_ta.hpp"

namespace teekv {

namespace {

void WriteDefaultManifest(const std::filesystem::path& path) {
  std::ofstream out(path);
  out << "# teekv TA manifest: <uuid> <kind> <memory_limit_bytes>\n";
  out << kKvTaUuid.ToString() << " user " << core::kDefaultTaMemoryLimit << "\n";
  out << kStorageTaUuid.ToString() << " user " << core::kDefaultTaMemoryLimit << "\n";
}

// Keeps the platform's KV-instance pointer in sync with the instance
// lifetime so the stats pseudo TA never reads a dangling pointer.
class SlottedKvTa : public kv::KvTa {
 public:
  explicit SlottedKvTa(std::shared_ptr<std::atomic<kv::KvTa*>> slot) : slot_(std::move(slot)) {
    slot_->store(this);
  }
  ~SlottedKvTa() override {
    kv::KvTa* self = this;
    slot_->compare_exchange_strong(self, nullptr);
  }

 private:
  std::shared_ptr<std::atomic<kv::KvTa*>> slot_;
};

}  // namespace

PlatformConfig PlatformConfig::FromEnvironment() {
  PlatformConfig config;
  const char* root = std::getenv("TEEKV_STORE_ROOT");
  config.store_root = (root != nullptr && *root != '\0') ? root : "./teekv-store";

  if (const char* huk_text = std::getenv("TEEKV_HUK");
      huk_text != nullptr && *huk_text != '\0' && std::string_view(huk_text) != "static") {
    auto bytes = HexDecode(huk_text);
    if (bytes && bytes->size() == storage::kKeySize) {
      storage::Huk huk;
      huk.source = storage::Huk::Source::kProvisioned;
      std::copy(bytes->begin(), bytes->end(), huk.bytes.begin());
      config.huk = huk;
    }
  }
  return config;
}

Platform::Platform(PlatformConfig config) : config_(std::move(config)) {
  if (config_.manifest_path.empty()) {
    config_.manifest_path = config_.store_root / "ta_manifest.txt";
  }
  std::filesystem::create_directories(config_.store_root);
  if (!std::filesystem::exists(config_.manifest_path)) {
    WriteDefaultManifest(config_.manifest_path);
  }

  supplicant_ = std::make_unique<supplicant::Supplicant>(config_.store_root,
                                                         config_.manifest_path);

  storage::Huk huk = config_.huk.value_or(storage::Huk::StaticFallback());
  uint64_t seed = config_.storage_seed.value_or(Rng::EntropySeed());
  storage_ = std::make_unique<storage::StorageService>(huk, *supplicant_, seed);

  core::CoreConfig core_config;
  core_config.shared_pool_size = config_.shared_pool_size;
  core_config.injected_latency = config_.injected_latency;
  core_ = std::make_unique<core::TeeCore>(*supplicant_, *storage_, core_config);

  kv_slot_ = std::make_shared<std::atomic<kv::KvTa*>>(nullptr);
  auto slot = kv_slot_;
  core_->RegisterUserTaFactory(
      kKvTaUuid, [slot]() -> std::unique_ptr<core::TrustedApp> {
        return std::make_unique<SlottedKvTa>(slot);
      });
  core_->RegisterUserTaFactory(kStorageTaUuid,
                               [] { return std::make_unique<storage_ta::StorageTa>(); });

  core::TaDescriptor stats_desc;
  stats_desc.uuid = kStatsPtaUuid;
  stats_desc.kind = TaKind::kPseudo;
  core_->RegisterPseudoTa(stats_desc, [this, slot] {
    return std::make_unique<pta::StatsPta>(*core_, [slot]() -> uint64_t {
      kv::KvTa* ta = slot->load();
      return ta != nullptr ? ta->size() : 0;
    });
  });

  client_.RegisterDevice(config_.device_name, *core_);
}

uint64_t Platform::KvEntryCount() const {
  kv::KvTa* ta = kv_slot_->load();
  return ta != nullptr ? ta->size() : 0;
}

}  // namespace teekv
