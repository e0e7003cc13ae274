// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/gp_client.hpp"

#include <algorithm>
#include <array>

namespace teekv::gp {

void TeeClient::RegisterDevice(std::string name, core::TeeCore& core) {
  std::lock_guard<std::mutex> lock(mu_);
  devices_[std::move(name)] = &core;
}

Result<ContextHandle> TeeClient::InitializeContext(std::string_view device_name) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = devices_.find(device_name);
  if (it == devices_.end()) return Result<ContextHandle>::Error(kUnknownDevice);

  uint64_t id = next_id_++;
  ContextState ctx;
  ctx.core = it->second;
  ctx.device_name = it->first;
  contexts_.emplace(id, std::move(ctx));
  return ContextHandle{id};
}

uint32_t TeeClient::FinalizeContext(ContextHandle handle) {
  std::unique_lock<std::mutex> lock(mu_);
  auto it = contexts_.find(handle.id);
  if (it == contexts_.end()) return kStaleHandle;

  // Cascade: dependent sessions are closed (close entry points run) and
  // regions released before the context goes away.
  std::vector<uint64_t> sessions(it->second.sessions.begin(), it->second.sessions.end());
  std::vector<uint64_t> regions(it->second.regions.begin(), it->second.regions.end());
  for (uint64_t s : sessions) CloseSessionLocked(s);
  for (uint64_t r : regions) ReleaseRegionLocked(r);
  contexts_.erase(handle.id);
  return kSuccess;
}

Result<SessionHandle> TeeClient::OpenSession(ContextHandle ctx, const Uuid& ta) {
  core::TeeCore* core = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = contexts_.find(ctx.id);
    if (it == contexts_.end()) return Result<SessionHandle>::Error(kStaleHandle);
    core = it->second.core;
  }

  auto opened = core->OpenSession(ta);
  if (!opened.ok()) return Result<SessionHandle>::Error(opened.code());

  std::lock_guard<std::mutex> lock(mu_);
  auto it = contexts_.find(ctx.id);
  if (it == contexts_.end()) {
    // Context was finalized concurrently; undo the core-side session.
    core->CloseSession(opened.value());
    return Result<SessionHandle>::Error(kStaleHandle);
  }
  uint64_t id = next_id_++;
  sessions_.emplace(id, SessionState{ctx.id, ta, opened.value()});
  it->second.sessions.insert(id);
  return SessionHandle{id};
}

uint32_t TeeClient::CloseSessionLocked(uint64_t id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return kStaleHandle;
  SessionState state = it->second;
  sessions_.erase(it);
  if (auto ctx = contexts_.find(state.ctx); ctx != contexts_.end()) {
    ctx->second.sessions.erase(id);
    ctx->second.core->CloseSession(state.core_session);
  }
  return kSuccess;
}

uint32_t TeeClient::CloseSession(SessionHandle session) {
  std::lock_guard<std::mutex> lock(mu_);
  return CloseSessionLocked(session.id);
}

Result<ShmHandle> TeeClient::SetupSharedMemory(ContextHandle ctx, size_t size, ShmKind kind,
                                               std::span<uint8_t> client_buffer) {
  using R = Result<ShmHandle>;
  std::lock_guard<std::mutex> lock(mu_);
  auto it = contexts_.find(ctx.id);
  if (it == contexts_.end()) return R::Error(kStaleHandle);
  if (size == 0) return R::Error(kBadParameters);

  RegionState region;
  region.ctx = ctx.id;
  region.kind = kind;
  region.size = size;
  switch (kind) {
    case ShmKind::kWhole:
      if (!client_buffer.empty()) return R::Error(kBadParameters);
      if (!it->second.core->ReserveSharedMemory(size)) return R::Error(kOutOfMemory);
      region.owned.assign(size, 0);  // TEE-side allocation, zero-initialized
      break;
    case ShmKind::kTemporary:
      if (client_buffer.size() != size) return R::Error(kBadParameters);
      region.external = client_buffer;
      break;
  }

  uint64_t id = next_id_++;
  regions_.emplace(id, std::move(region));
  it->second.regions.insert(id);
  return ShmHandle{id};
}

uint32_t TeeClient::ReleaseRegionLocked(uint64_t id) {
  auto it = regions_.find(id);
  if (it == regions_.end()) return kStaleHandle;
  if (it->second.kind == ShmKind::kWhole) {
    if (auto ctx = contexts_.find(it->second.ctx); ctx != contexts_.end()) {
      ctx->second.core->ReleaseSharedMemory(it->second.size);
    }
  }
  if (auto ctx = contexts_.find(it->second.ctx); ctx != contexts_.end()) {
    ctx->second.regions.erase(id);
  }
  regions_.erase(it);
  return kSuccess;
}

uint32_t TeeClient::ReleaseSharedMemory(ShmHandle region) {
  std::lock_guard<std::mutex> lock(mu_);
  return ReleaseRegionLocked(region.id);
}

Result<std::span<uint8_t>> TeeClient::RegionBytes(ShmHandle region) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = regions_.find(region.id);
  if (it == regions_.end() || it->second.consumed) {
    return Result<std::span<uint8_t>>::Error(kStaleHandle);
  }
  return it->second.bytes();
}

uint32_t TeeClient::InvokeCommand(SessionHandle session, Operation& op) {
  core::TeeCore* core = nullptr;
  uint64_t core_session = 0;
  std::array<core::TaParam, kMaxParams> resolved{};
  std::vector<uint64_t> temporaries;

  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sessions_.find(session.id);
    if (it == sessions_.end()) return kStaleHandle;
    auto ctx = contexts_.find(it->second.ctx);
    if (ctx == contexts_.end()) return kStaleHandle;
    core = ctx->second.core;
    core_session = it->second.core_session;

    if (op.params.size() > kMaxParams) return kBadParameters;
    for (size_t i = 0; i < op.params.size(); ++i) {
      if (auto* value = std::get_if<ValueParam>(&op.params[i])) {
        resolved[i] = core::TaValue{&value->a, &value->b};
        continue;
      }
      const MemRefParam& ref = std::get<MemRefParam>(op.params[i]);
      auto region = regions_.find(ref.region.id);
      if (region == regions_.end() || region->second.consumed) return kStaleHandle;
      if (region->second.ctx != it->second.ctx) return kBadParameters;
      // offset + length <= size, overflow-safe; the bound is exclusive.
      if (ref.offset > region->second.size || ref.length > region->second.size - ref.offset) {
        return kBadParameters;
      }
      resolved[i] = core::TaMem{region->second.bytes().subspan(ref.offset, ref.length),
                                ref.direction};
      if (region->second.kind == ShmKind::kTemporary) temporaries.push_back(ref.region.id);
    }
  }

  uint32_t code =
      core->Dispatch(core_session, op.command_id, core::TaParams(resolved.data(), op.params.size()));

  if (!temporaries.empty()) {
    // The call crossed the boundary; the temporary registrations are spent
    // whatever the TA returned.
    std::lock_guard<std::mutex> lock(mu_);
    for (uint64_t id : temporaries) {
      if (auto it = regions_.find(id); it != regions_.end()) it->second.consumed = true;
    }
  }
  return code;
}

}  // namespace teekv::gp
