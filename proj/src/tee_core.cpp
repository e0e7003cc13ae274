// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/tee_core.hpp"

#include <thread>

namespace teekv::core {

void* TaHeap::Alloc(size_t n) {
  if (n == 0) return nullptr;
  if (used_ + n > limit_ || used_ + n < used_) return nullptr;
  Block block{std::make_unique<uint8_t[]>(n), n};
  void* p = block.bytes.get();
  blocks_.emplace(p, std::move(block));
  used_ += n;
  return p;
}

uint32_t TaHeap::Free(void* p) {
  auto it = blocks_.find(p);
  if (it == blocks_.end()) return kBadParameters;
  used_ -= it->second.size;
  blocks_.erase(it);
  return kSuccess;
}

Result<storage::PersistentObject> TaServices::CreateObject(std::span<const uint8_t> object_id,
                                                           std::span<const uint8_t> initial) {
  using R = Result<storage::PersistentObject>;
  if (kind_ == TaKind::kPseudo || storage_ == nullptr) return R::Error(kAccessDenied);
  return storage_->Create(uuid_, object_id, initial);
}

Result<storage::PersistentObject> TaServices::OpenObject(std::span<const uint8_t> object_id) {
  using R = Result<storage::PersistentObject>;
  if (kind_ == TaKind::kPseudo || storage_ == nullptr) return R::Error(kAccessDenied);
  return storage_->Open(uuid_, object_id);
}

TeeCore::TeeCore(supplicant::Supplicant& supplicant, storage::StorageService& storage,
                 CoreConfig config)
    : supplicant_(supplicant),
      storage_(storage),
      shared_pool_size_(config.shared_pool_size) {
  injected_latency_ns_.store(config.injected_latency.count());
}

void TeeCore::CountSwitch() {
  world_switches_.fetch_add(1);
  int64_t latency = injected_latency_ns_.load();
  if (latency > 0) std::this_thread::sleep_for(std::chrono::nanoseconds(latency));
}

void TeeCore::TraceEvent(const Instance& inst, DispatchEvent::Phase phase, uint32_t command_id) {
  if (!trace_enabled_.load(std::memory_order_relaxed)) return;
  std::lock_guard<std::mutex> lock(trace_mu_);
  trace_.push_back(DispatchEvent{trace_seq_++, inst.id, phase, command_id});
}

uint32_t TeeCore::RegisterPseudoTa(const TaDescriptor& desc, TaFactory factory) {
  if (desc.kind != TaKind::kPseudo) return kBadParameters;
  std::lock_guard<std::mutex> lock(mu_);
  if (pseudo_descriptors_.count(desc.uuid) || factories_.count(desc.uuid)) {
    return kDuplicateUuid;
  }
  pseudo_descriptors_.emplace(desc.uuid, desc);
  factories_.emplace(desc.uuid, std::move(factory));
  return kSuccess;
}

uint32_t TeeCore::RegisterUserTaFactory(const Uuid& uuid, TaFactory factory) {
  std::lock_guard<std::mutex> lock(mu_);
  if (factories_.count(uuid)) return kDuplicateUuid;
  factories_.emplace(uuid, std::move(factory));
  return kSuccess;
}

// Instance lookup or creation. For user TAs the descriptor comes from the
// supplicant (LOAD_TA); create entry points run here, once per load.
Result<std::shared_ptr<TeeCore::Instance>> TeeCore::EnsureInstance(const Uuid& ta) {
  using R = Result<std::shared_ptr<Instance>>;

  if (auto it = instances_.find(ta); it != instances_.end()) {
    if (it->second->state == InstanceState::kDestroyed) {
      instances_.erase(it);  // a fresh open re-loads a panicked TA
    } else {
      return it->second;
    }
  }

  TaDescriptor desc;
  if (auto it = pseudo_descriptors_.find(ta); it != pseudo_descriptors_.end()) {
    desc = it->second;
  } else {
    auto entry = supplicant_.LoadTa(ta);
    if (!entry.ok()) return R::Error(entry.code());
    desc.uuid = ta;
    desc.kind = TaKind::kUser;
    desc.memory_limit =
        entry.value().memory_limit > 0 ? entry.value().memory_limit : kDefaultTaMemoryLimit;
  }

  auto factory = factories_.find(ta);
  if (factory == factories_.end()) return R::Error(kTaNotFound);

  auto inst = std::make_shared<Instance>(next_id_++, desc, factory->second());
  TaServices services(inst->descriptor.uuid, inst->descriptor.kind, inst->heap, &storage_);
  try {
    if (uint32_t code = inst->app->OnCreate(services); code != kSuccess) {
      return R::Error(kTargetDead);
    }
  } catch (...) {
    return R::Error(kTargetDead);
  }
  instances_.emplace(ta, inst);
  return inst;
}

Result<uint64_t> TeeCore::OpenSession(const Uuid& ta) {
  using R = Result<uint64_t>;
  std::shared_ptr<Instance> inst;
  uint64_t session_id = 0;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto ensured = EnsureInstance(ta);
    if (!ensured.ok()) return R::Error(ensured.code());
    inst = ensured.take();
    session_id = next_id_++;
  }

  CountSwitch();
  {
    std::lock_guard<std::mutex> exec(inst->exec_mu);
    TaServices services(inst->descriptor.uuid, inst->descriptor.kind, inst->heap, &storage_);
    try {
      if (uint32_t code = inst->app->OnOpenSession(services); code != kSuccess) {
        return R::Error(kTargetDead);
      }
    } catch (...) {
      PanicInstance(inst);
      return R::Error(kTargetDead);
    }
  }

  std::lock_guard<std::mutex> lock(mu_);
  inst->open_sessions++;
  inst->state = InstanceState::kSessionsOpen;
  sessions_.emplace(session_id, Session{session_id, inst, false});
  return session_id;
}

uint32_t TeeCore::CloseSession(uint64_t session_id) {
  std::shared_ptr<Instance> inst;
  bool dead = false;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) return kStaleHandle;
    inst = it->second.instance;
    dead = it->second.target_dead;
    sessions_.erase(it);
    if (inst->open_sessions > 0) inst->open_sessions--;
    if (inst->open_sessions == 0 && inst->state == InstanceState::kSessionsOpen) {
      inst->state = InstanceState::kCreated;
    }
  }

  CountSwitch();
  if (!dead && inst->state != InstanceState::kDestroyed) {
    std::lock_guard<std::mutex> exec(inst->exec_mu);
    TaServices services(inst->descriptor.uuid, inst->descriptor.kind, inst->heap, &storage_);
    try {
      inst->app->OnCloseSession(services);
    } catch (...) {
      PanicInstance(inst);
      return kTargetDead;
    }
  }
  return kSuccess;
}

void TeeCore::PanicInstance(const std::shared_ptr<Instance>& inst) {
  std::lock_guard<std::mutex> lock(mu_);
  inst->state = InstanceState::kDestroyed;
  for (auto& [id, session] : sessions_) {
    if (session.instance == inst) session.target_dead = true;
  }
}

uint32_t TeeCore::Dispatch(uint64_t session_id, uint32_t command_id, TaParams params) {
  std::shared_ptr<Instance> inst;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) return kStaleHandle;
    if (it->second.target_dead) return kTargetDead;
    inst = it->second.instance;
  }
  if (inst->state == InstanceState::kDestroyed) return kTargetDead;

  CountSwitch();
  std::lock_guard<std::mutex> exec(inst->exec_mu);
  TraceEvent(*inst, DispatchEvent::Phase::kEnter, command_id);
  TaServices services(inst->descriptor.uuid, inst->descriptor.kind, inst->heap, &storage_);
  uint32_t code;
  try {
    code = inst->app->OnInvoke(services, command_id, params);
  } catch (...) {
    TraceEvent(*inst, DispatchEvent::Phase::kExit, command_id);
    PanicInstance(inst);
    return kTargetDead;
  }
  TraceEvent(*inst, DispatchEvent::Phase::kExit, command_id);
  return code;
}

BoundaryStats TeeCore::ReadStats() const {
  BoundaryStats stats;
  stats.world_switches = world_switches_.load();
  stats.supplicant_rpcs = supplicant_.total_rpcs();
  stats.injected_latency = std::chrono::nanoseconds(injected_latency_ns_.load());
  return stats;
}

void TeeCore::set_injected_latency(std::chrono::nanoseconds latency) {
  injected_latency_ns_.store(latency.count());
}

bool TeeCore::ReserveSharedMemory(size_t bytes) {
  std::lock_guard<std::mutex> lock(mu_);
  if (bytes > shared_pool_size_ - shared_pool_used_) return false;
  shared_pool_used_ += bytes;
  return true;
}

void TeeCore::ReleaseSharedMemory(size_t bytes) {
  std::lock_guard<std::mutex> lock(mu_);
  shared_pool_used_ -= std::min(bytes, shared_pool_used_);
}

size_t TeeCore::shared_pool_free() const {
  std::lock_guard<std::mutex> lock(mu_);
  return shared_pool_size_ - shared_pool_used_;
}

std::optional<InstanceInfo> TeeCore::GetInstanceInfo(const Uuid& uuid) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = instances_.find(uuid);
  if (it == instances_.end()) return std::nullopt;
  const Instance& inst = *it->second;
  return InstanceInfo{inst.state.load(), inst.heap.used(), inst.descriptor.memory_limit,
                      inst.open_sessions};
}

void TeeCore::set_trace_enabled(bool enabled) {
  std::lock_guard<std::mutex> lock(trace_mu_);
  trace_enabled_ = enabled;
  if (!enabled) {
    trace_.clear();
    trace_seq_ = 0;
  }
}

std::vector<DispatchEvent> TeeCore::TakeTrace() {
  std::lock_guard<std::mutex> lock(trace_mu_);
  std::vector<DispatchEvent> out = std::move(trace_);
  trace_.clear();
  return out;
}

}  // namespace teekv::core
