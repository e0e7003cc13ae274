// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_GP_CLIENT_HPP_
#define TEEKV_GP_CLIENT_HPP_

#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "teekv/codes.hpp"
#include "teekv/result.hpp"
#include "teekv/tee_core.hpp"
#include "teekv/uuid.hpp"

namespace teekv::gp {

// Normal-world client library: context, session, shared memory and command
// invocation against a registered emulated TEE endpoint.
//
// Handles are opaque integers drawn from one monotonic counter per client
// and are never reused within the client's lifetime, so any use of a
// finalized handle is detectable as kStaleHandle.

struct ContextHandle {
  uint64_t id = 0;
  friend auto operator<=>(const ContextHandle&, const ContextHandle&) = default;
};
struct SessionHandle {
  uint64_t id = 0;
  friend auto operator<=>(const SessionHandle&, const SessionHandle&) = default;
};
struct ShmHandle {
  uint64_t id = 0;
  friend auto operator<=>(const ShmHandle&, const ShmHandle&) = default;
};

// whole: allocated on the TEE side from the shared pool, context-scoped,
//        zero-initialized.
// temporary: a client-owned buffer registered for the duration of exactly
//        one invoke; unusable afterwards.
// A partial view is not a region kind but a reference style: a MemRef with
// an explicit (offset, length) window into a whole region.
enum class ShmKind { kWhole, kTemporary };

using core::MemDirection;

struct ValueParam {
  uint32_t a = 0;
  uint32_t b = 0;
};
struct MemRefParam {
  ShmHandle region;
  size_t offset = 0;
  size_t length = 0;
  MemDirection direction = MemDirection::kIn;
};
using Parameter = std::variant<ValueParam, MemRefParam>;

inline constexpr size_t kMaxParams = 4;

struct Operation {
  uint32_t command_id = 0;
  std::vector<Parameter> params;  // at most kMaxParams
};

class TeeClient {
 public:
  TeeClient() = default;
  TeeClient(const TeeClient&) = delete;
  TeeClient& operator=(const TeeClient&) = delete;

  void RegisterDevice(std::string name, core::TeeCore& core);

  // Fails with kUnknownDevice for unregistered endpoint names. A client may
  // hold several live contexts, including to the same endpoint.
  Result<ContextHandle> InitializeContext(std::string_view device_name);

  // Invalidates the context and everything dependent on it: sessions are
  // closed (close entry points run) and regions are released.
  uint32_t FinalizeContext(ContextHandle ctx);

  Result<SessionHandle> OpenSession(ContextHandle ctx, const Uuid& ta);
  uint32_t CloseSession(SessionHandle session);

  // kWhole: size > 0, counted against the endpoint's shared pool, and
  // client_buffer must be empty. kTemporary: client_buffer supplies the
  // client-owned bytes and must be exactly `size` long.
  Result<ShmHandle> SetupSharedMemory(ContextHandle ctx, size_t size, ShmKind kind,
                                      std::span<uint8_t> client_buffer = {});
  uint32_t ReleaseSharedMemory(ShmHandle region);

  // Client-side view of the region bytes (for filling whole regions and
  // reading results). Fails on stale or consumed regions.
  Result<std::span<uint8_t>> RegionBytes(ShmHandle region);

  // Exactly one world round trip on success. Out/inout memory and value
  // slots reflect TA-side writes when this returns. The returned code is
  // either a transport error (stale handles, bad parameters) or the TA's
  // own return code. Temporary regions referenced by op are consumed once
  // the call has crossed the boundary, whatever the TA returned.
  uint32_t InvokeCommand(SessionHandle session, Operation& op);

 private:
  struct ContextState {
    core::TeeCore* core = nullptr;
    std::string device_name;
    std::set<uint64_t> sessions;
    std::set<uint64_t> regions;
  };
  struct SessionState {
    uint64_t ctx = 0;
    Uuid ta;
    uint64_t core_session = 0;
  };
  struct RegionState {
    uint64_t ctx = 0;
    ShmKind kind = ShmKind::kWhole;
    size_t size = 0;
    std::vector<uint8_t> owned;   // whole
    std::span<uint8_t> external;  // temporary
    bool consumed = false;

    std::span<uint8_t> bytes() {
      return kind == ShmKind::kWhole ? std::span<uint8_t>(owned) : external;
    }
  };

  uint32_t CloseSessionLocked(uint64_t id);
  uint32_t ReleaseRegionLocked(uint64_t id);

  std::mutex mu_;
  uint64_t next_id_ = 1;
  std::map<std::string, core::TeeCore*, std::less<>> devices_;
  std::map<uint64_t, ContextState> contexts_;
  std::map<uint64_t, SessionState> sessions_;
  std::map<uint64_t, RegionState> regions_;
};

}  // namespace teekv::gp

#endif  // TEEKV_GP_CLIENT_HPP_
