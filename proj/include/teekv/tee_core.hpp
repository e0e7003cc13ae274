// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_TEE_CORE_HPP_
#define TEEKV_TEE_CORE_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "teekv/codes.hpp"
#include "teekv/result.hpp"
#include "teekv/secure_storage.hpp"
#include "teekv/supplicant.hpp"
#include "teekv/uuid.hpp"

namespace teekv::core {

inline constexpr size_t kDefaultTaMemoryLimit = 1024 * 1024;

struct TaDescriptor {
  Uuid uuid;
  TaKind kind = TaKind::kUser;
  size_t memory_limit = kDefaultTaMemoryLimit;
};

enum class MemDirection { kIn, kOut, kInOut };

// Parameter views handed to a TA's invoke hook. Value slots point into the
// caller's operation, memory views point into the shared region bytes, so
// TA writes are visible to the normal world without copy-back.
struct TaValue {
  uint32_t* a = nullptr;
  uint32_t* b = nullptr;
};
struct TaMem {
  std::span<uint8_t> bytes;
  MemDirection direction = MemDirection::kIn;
};
using TaParam = std::variant<TaValue, TaMem>;
using TaParams = std::span<TaParam>;

inline TaValue* ValueAt(TaParams params, size_t i) {
  if (i >= params.size()) return nullptr;
  return std::get_if<TaValue>(&params[i]);
}
inline TaMem* MemAt(TaParams params, size_t i) {
  if (i >= params.size()) return nullptr;
  return std::get_if<TaMem>(&params[i]);
}

// Accounting allocator backing one TA instance. Accounts exactly the
// requested sizes; allocator metadata is not charged.
class TaHeap {
 public:
  explicit TaHeap(size_t limit) : limit_(limit) {}

  // nullptr when n == 0 or the limit would be exceeded.
  void* Alloc(size_t n);
  uint32_t Free(void* p);

  size_t used() const { return used_; }
  size_t limit() const { return limit_; }

 private:
  struct Block {
    std::unique_ptr<uint8_t[]> bytes;
    size_t size = 0;
  };

  size_t limit_;
  size_t used_ = 0;
  std::unordered_map<void*, Block> blocks_;
};

class TaServices;

// Entry points of a trusted application. Hooks run under the per-instance
// serialization guarantee. A thrown exception is a TA panic: the instance is
// destroyed and its sessions become target-dead.
class TrustedApp {
 public:
  virtual ~TrustedApp() = default;

  virtual uint32_t OnCreate(TaServices&) { return kSuccess; }
  virtual uint32_t OnOpenSession(TaServices&) { return kSuccess; }
  virtual uint32_t OnInvoke(TaServices& services, uint32_t command_id, TaParams params) = 0;
  virtual void OnCloseSession(TaServices&) {}
  virtual void OnDestroy(TaServices&) {}
};

using TaFactory = std::function<std::unique_ptr<TrustedApp>()>;

enum class InstanceState { kCreated, kSessionsOpen, kDestroyed };

// Internal-API surface handed to TA hooks: accounted heap access and the
// trusted-storage service. Pseudo TAs are denied the storage API.
class TaServices {
 public:
  TaServices(const Uuid& uuid, TaKind kind, TaHeap& heap, storage::StorageService* storage)
      : uuid_(uuid), kind_(kind), heap_(heap), storage_(storage) {}

  void* Alloc(size_t n) { return heap_.Alloc(n); }
  uint32_t Free(void* p) { return heap_.Free(p); }
  size_t heap_used() const { return heap_.used(); }
  size_t heap_limit() const { return heap_.limit(); }

  const Uuid& uuid() const { return uuid_; }
  TaKind kind() const { return kind_; }

  Result<storage::PersistentObject> CreateObject(std::span<const uint8_t> object_id,
                                                 std::span<const uint8_t> initial);
  Result<storage::PersistentObject> OpenObject(std::span<const uint8_t> object_id);

 private:
  const Uuid& uuid_;
  TaKind kind_;
  TaHeap& heap_;
  storage::StorageService* storage_;
};

// Boundary accounting. world_switches counts completed normal->secure->normal
// round trips: exactly one per open_session, close_session and invoke.
// Nothing else crosses the boundary; shared-memory setup is normal-world
// bookkeeping. supplicant_rpcs mirrors the supplicant's total counter.
struct BoundaryStats {
  uint64_t world_switches = 0;
  uint64_t supplicant_rpcs = 0;
  std::chrono::nanoseconds injected_latency{0};
};

// World switches contributed by one open/close pair.
inline constexpr uint64_t kSessionSwitchOverhead = 2;

struct DispatchEvent {
  uint64_t seq = 0;
  uint64_t instance_id = 0;
  enum class Phase { kEnter, kExit } phase = Phase::kEnter;
  uint32_t command_id = 0;
};

struct InstanceInfo {
  InstanceState state = InstanceState::kCreated;
  size_t heap_used = 0;
  size_t memory_limit = 0;
  uint64_t open_sessions = 0;
};

struct CoreConfig {
  size_t shared_pool_size = 4 * 1024 * 1024;
  std::chrono::nanoseconds injected_latency{0};
};

// The emulated secure world: TA registry, instance lifecycle, command
// dispatch with per-instance mutual exclusion, shared-pool accounting and
// boundary statistics.
class TeeCore {
 public:
  TeeCore(supplicant::Supplicant& supplicant, storage::StorageService& storage,
          CoreConfig config = {});

  TeeCore(const TeeCore&) = delete;
  TeeCore& operator=(const TeeCore&) = delete;

  // Pseudo TAs are registered in-core; sessions to them never involve the
  // supplicant. desc.kind must be kPseudo.
  uint32_t RegisterPseudoTa(const TaDescriptor& desc, TaFactory factory);

  // Makes a user TA instantiable once the supplicant's manifest lists it.
  uint32_t RegisterUserTaFactory(const Uuid& uuid, TaFactory factory);

  // One world switch. For an unloaded user TA this issues a LOAD_TA RPC and
  // runs the create entry point; pseudo TAs skip the load step. The instance
  // is shared: a second session reuses it without a second LOAD_TA.
  Result<uint64_t> OpenSession(const Uuid& ta);

  // One world switch; runs the close entry point.
  uint32_t CloseSession(uint64_t session_id);

  // One world switch; runs the invoke hook under the instance lock. A hook
  // exception destroys the instance and returns kTargetDead.
  uint32_t Dispatch(uint64_t session_id, uint32_t command_id, TaParams params);

  BoundaryStats ReadStats() const;
  void set_injected_latency(std::chrono::nanoseconds latency);

  // Shared-memory pool accounting for whole regions (gp_client side).
  bool ReserveSharedMemory(size_t bytes);
  void ReleaseSharedMemory(size_t bytes);
  size_t shared_pool_free() const;

  std::optional<InstanceInfo> GetInstanceInfo(const Uuid& uuid) const;

  void set_trace_enabled(bool enabled);
  std::vector<DispatchEvent> TakeTrace();

  storage::StorageService& storage() { return storage_; }

 private:
  struct Instance {
    uint64_t id = 0;
    TaDescriptor descriptor;
    std::unique_ptr<TrustedApp> app;
    TaHeap heap;
    std::atomic<InstanceState> state{InstanceState::kCreated};
    uint64_t open_sessions = 0;
    std::mutex exec_mu;  // single-threaded TA guarantee

    Instance(uint64_t id, TaDescriptor desc, std::unique_ptr<TrustedApp> app)
        : id(id), descriptor(std::move(desc)), app(std::move(app)), heap(descriptor.memory_limit) {}
  };

  struct Session {
    uint64_t id = 0;
    std::shared_ptr<Instance> instance;
    bool target_dead = false;
  };

  void CountSwitch();
  void TraceEvent(const Instance& inst, DispatchEvent::Phase phase, uint32_t command_id);
  // Marks the instance destroyed and poisons every session bound to it.
  void PanicInstance(const std::shared_ptr<Instance>& inst);
  Result<std::shared_ptr<Instance>> EnsureInstance(const Uuid& ta);

  supplicant::Supplicant& supplicant_;
  storage::StorageService& storage_;

  mutable std::mutex mu_;
  uint64_t next_id_ = 1;
  std::unordered_map<Uuid, TaDescriptor> pseudo_descriptors_;
  std::unordered_map<Uuid, TaFactory> factories_;  // pseudo and user
  std::unordered_map<Uuid, std::shared_ptr<Instance>> instances_;
  std::unordered_map<uint64_t, Session> sessions_;

  std::atomic<uint64_t> world_switches_{0};
  std::atomic<int64_t> injected_latency_ns_{0};

  size_t shared_pool_size_;
  size_t shared_pool_used_ = 0;

  std::mutex trace_mu_;
  std::atomic<bool> trace_enabled_{false};
  uint64_t trace_seq_ = 0;
  std::vector<DispatchEvent> trace_;
};

}  // namespace teekv::core

#endif  // TEEKV_TEE_CORE_HPP_
