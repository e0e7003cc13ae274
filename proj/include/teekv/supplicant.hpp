// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_SUPPLICANT_HPP_
#define TEEKV_SUPPLICANT_HPP_

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "teekv/codes.hpp"
#include "teekv/result.hpp"
#include "teekv/uuid.hpp"

namespace teekv::supplicant {

// Emulated normal-world daemon servicing TEE-originated remote procedure
// calls: trusted-application lookup and encrypted-object file I/O. Runs
// in-process behind a synchronous request/response interface; the RPC
// boundary is preserved logically through the message types and counters.

enum class RpcKind : int {
  kLoadTa = 0,
  kFsOpen,
  kFsRead,
  kFsWrite,
  kFsRemove,
  kFsList,
};
inline constexpr int kRpcKindCount = 6;

struct LoadTaRequest {
  Uuid uuid;
};
struct FsOpenRequest {
  std::string name;    // relative to the store root, at most "<dir>/<leaf>"
  bool create = false; // create-exclusive: fails if the file already exists
};
struct FsReadRequest {
  uint64_t file_id = 0;
  uint64_t offset = 0;
  uint64_t length = 0;
};
struct FsWriteRequest {
  uint64_t file_id = 0;
  uint64_t offset = 0;
  std::vector<uint8_t> bytes;
};
struct FsRemoveRequest {
  std::string name;
};
struct FsListRequest {
  std::string prefix;
};

using RpcRequest = std::variant<LoadTaRequest, FsOpenRequest, FsReadRequest, FsWriteRequest,
                                FsRemoveRequest, FsListRequest>;

struct TaManifestEntry {
  Uuid uuid;
  TaKind kind = TaKind::kUser;
  size_t memory_limit = 0;
};

struct LoadTaResponse {
  TaManifestEntry entry;
};
struct FsOpenResponse {
  uint64_t file_id = 0;
  uint64_t size = 0;
};
struct FsReadResponse {
  std::vector<uint8_t> bytes;
};
struct FsListResponse {
  std::vector<std::string> names;
};

struct RpcResponse {
  uint32_t code = kSuccess;
  std::string detail;  // OS-level detail for kIoError
  std::variant<std::monostate, LoadTaResponse, FsOpenResponse, FsReadResponse, FsListResponse>
      payload;
};

class Supplicant {
 public:
  // store_root is created if missing; manifest_path may not exist yet (all
  // LoadTa requests then miss).
  Supplicant(std::filesystem::path store_root, std::filesystem::path manifest_path);

  Supplicant(const Supplicant&) = delete;
  Supplicant& operator=(const Supplicant&) = delete;

  // Single entry point; requests are serialized in arrival order and every
  // call increments the RPC counters.
  RpcResponse HandleRpc(const RpcRequest& req);

  // Typed wrappers over HandleRpc.
  Result<TaManifestEntry> LoadTa(const Uuid& uuid);
  Result<FsOpenResponse> FsOpen(std::string_view name, bool create);
  Result<std::vector<uint8_t>> FsRead(uint64_t file_id, uint64_t offset, uint64_t length);
  uint32_t FsWrite(uint64_t file_id, uint64_t offset, std::span<const uint8_t> bytes);
  uint32_t FsRemove(std::string_view name);
  Result<std::vector<std::string>> FsList(std::string_view prefix);

  uint64_t total_rpcs() const { return total_rpcs_.load(); }
  uint64_t rpcs(RpcKind kind) const { return per_kind_[static_cast<int>(kind)].load(); }

  const std::filesystem::path& store_root() const { return store_root_; }
  const std::filesystem::path& manifest_path() const { return manifest_path_; }

  // Validates the "<dir>/<leaf>" shape used for persisted objects: at most
  // one separator, no traversal components, characters from a safe set.
  static bool IsSafeName(std::string_view name);

 private:
  RpcResponse Dispatch(const RpcRequest& req);
  RpcResponse DoLoadTa(const LoadTaRequest&);
  RpcResponse DoFsOpen(const FsOpenRequest&);
  RpcResponse DoFsRead(const FsReadRequest&);
  RpcResponse DoFsWrite(const FsWriteRequest&);
  RpcResponse DoFsRemove(const FsRemoveRequest&);
  RpcResponse DoFsList(const FsListRequest&);

  std::filesystem::path store_root_;
  std::filesystem::path manifest_path_;

  std::mutex mu_;  // the single logical service loop
  uint64_t next_file_id_ = 1;
  std::unordered_map<uint64_t, std::filesystem::path> files_by_id_;
  std::unordered_map<std::string, uint64_t> ids_by_name_;

  std::atomic<uint64_t> total_rpcs_{0};
  std::array<std::atomic<uint64_t>, kRpcKindCount> per_kind_{};
};

}  // namespace teekv::supplicant

#endif  // TEEKV_SUPPLICANT_HPP_
