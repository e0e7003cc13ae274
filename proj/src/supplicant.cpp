// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/supplicant.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace teekv::supplicant {

namespace {

RpcResponse ErrorResponse(uint32_t code, std::string detail = {}) {
  RpcResponse resp;
  resp.code = code;
  resp.detail = std::move(detail);
  return resp;
}

RpcResponse IoErrorResponse(const char* op, int err) {
  std::string detail = std::string(op) + ": " + std::strerror(err);
  return ErrorResponse(err == ENOENT ? kItemNotFound : kIoError, std::move(detail));
}

bool IsSafeNameChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
         c == '_' || c == '-';
}

class Fd {
 public:
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }
  bool ok() const { return fd_ >= 0; }

 private:
  int fd_;
};

}  // namespace

Supplicant::Supplicant(std::filesystem::path store_root, std::filesystem::path manifest_path)
    : store_root_(std::move(store_root)), manifest_path_(std::move(manifest_path)) {
  std::filesystem::create_directories(store_root_);
}

bool Supplicant::IsSafeName(std::string_view name) {
  if (name.empty() || name.size() > 512) return false;
  size_t separators = 0;
  size_t component_start = 0;
  for (size_t i = 0; i <= name.size(); ++i) {
    if (i == name.size() || name[i] == '/') {
      std::string_view component = name.substr(component_start, i - component_start);
      if (component.empty() || component == "." || component == "..") return false;
      component_start = i + 1;
      if (i < name.size() && ++separators > 1) return false;
      continue;
    }
    if (name[i] == '\\') return false;
    if (!IsSafeNameChar(name[i])) return false;
  }
  return true;
}

RpcResponse Supplicant::HandleRpc(const RpcRequest& req) {
  std::lock_guard<std::mutex> lock(mu_);
  total_rpcs_.fetch_add(1);
  per_kind_[static_cast<int>(static_cast<RpcKind>(req.index()))].fetch_add(1);
  return Dispatch(req);
}

RpcResponse Supplicant::Dispatch(const RpcRequest& req) {
  return std::visit(
      [this](const auto& r) -> RpcResponse {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, LoadTaRequest>) return DoLoadTa(r);
        if constexpr (std::is_same_v<T, FsOpenRequest>) return DoFsOpen(r);
        if constexpr (std::is_same_v<T, FsReadRequest>) return DoFsRead(r);
        if constexpr (std::is_same_v<T, FsWriteRequest>) return DoFsWrite(r);
        if constexpr (std::is_same_v<T, FsRemoveRequest>) return DoFsRemove(r);
        if constexpr (std::is_same_v<T, FsListRequest>) return DoFsList(r);
      },
      req);
}

// Manifest: one TA per line, `<uuid> <kind> <memory_limit_bytes>`, `#`
// starts a comment. Malformed lines are skipped. Only kind `user` is
// loadable from the REE.
RpcResponse Supplicant::DoLoadTa(const LoadTaRequest& req) {
  std::ifstream in(manifest_path_);
  if (!in) return ErrorResponse(kTaNotFound, "no TA manifest");

  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string uuid_text, kind_text;
    uint64_t limit = 0;
    if (!(fields >> uuid_text >> kind_text >> limit)) continue;
    auto uuid = Uuid::Parse(uuid_text);
    if (!uuid || *uuid != req.uuid) continue;
    if (kind_text != "user") continue;
    RpcResponse resp;
    resp.payload = LoadTaResponse{TaManifestEntry{*uuid, TaKind::kUser, limit}};
    return resp;
  }
  return ErrorResponse(kTaNotFound, "uuid not in manifest");
}

RpcResponse Supplicant::DoFsOpen(const FsOpenRequest& req) {
  if (!IsSafeName(req.name)) return ErrorResponse(kPathViolation, req.name);
  std::filesystem::path path = store_root_ / req.name;

  if (req.create) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) return ErrorResponse(kIoError, ec.message());
    Fd fd(::open(path.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0600));
    if (!fd.ok()) {
      if (errno == EEXIST) return ErrorResponse(kAccessConflict, req.name);
      return IoErrorResponse("open", errno);
    }
  }

  struct stat st{};
  if (::stat(path.c_str(), &st) != 0) return IoErrorResponse("stat", errno);
  if (!S_ISREG(st.st_mode)) return ErrorResponse(kIoError, "not a regular file");

  uint64_t id;
  if (auto it = ids_by_name_.find(req.name); it != ids_by_name_.end()) {
    id = it->second;
  } else {
    id = next_file_id_++;
    ids_by_name_.emplace(req.name, id);
    files_by_id_.emplace(id, path);
  }

  RpcResponse resp;
  resp.payload = FsOpenResponse{id, static_cast<uint64_t>(st.st_size)};
  return resp;
}

RpcResponse Supplicant::DoFsRead(const FsReadRequest& req) {
  auto it = files_by_id_.find(req.file_id);
  if (it == files_by_id_.end()) return ErrorResponse(kBadParameters, "unknown file id");

  Fd fd(::open(it->second.c_str(), O_RDONLY));
  if (!fd.ok()) return IoErrorResponse("open", errno);

  std::vector<uint8_t> bytes(req.length);
  size_t total = 0;
  while (total < bytes.size()) {
    ssize_t n = ::pread(fd.get(), bytes.data() + total, bytes.size() - total,
                        static_cast<off_t>(req.offset + total));
    if (n < 0) return IoErrorResponse("pread", errno);
    if (n == 0) break;  // short read at EOF
    total += static_cast<size_t>(n);
  }
  bytes.resize(total);

  RpcResponse resp;
  resp.payload = FsReadResponse{std::move(bytes)};
  return resp;
}

// Durable once the response is returned: data is written and fdatasync'd
// before replying.
RpcResponse Supplicant::DoFsWrite(const FsWriteRequest& req) {
  auto it = files_by_id_.find(req.file_id);
  if (it == files_by_id_.end()) return ErrorResponse(kBadParameters, "unknown file id");

  Fd fd(::open(it->second.c_str(), O_WRONLY));
  if (!fd.ok()) return IoErrorResponse("open", errno);

  size_t total = 0;
  while (total < req.bytes.size()) {
    ssize_t n = ::pwrite(fd.get(), req.bytes.data() + total, req.bytes.size() - total,
                         static_cast<off_t>(req.offset + total));
    if (n < 0) return IoErrorResponse("pwrite", errno);
    total += static_cast<size_t>(n);
  }
  if (::fdatasync(fd.get()) != 0) return IoErrorResponse("fdatasync", errno);
  return RpcResponse{};
}

RpcResponse Supplicant::DoFsRemove(const FsRemoveRequest& req) {
  if (!IsSafeName(req.name)) return ErrorResponse(kPathViolation, req.name);
  std::filesystem::path path = store_root_ / req.name;
  if (::unlink(path.c_str()) != 0) return IoErrorResponse("unlink", errno);
  if (auto it = ids_by_name_.find(req.name); it != ids_by_name_.end()) {
    files_by_id_.erase(it->second);
    ids_by_name_.erase(it);
  }
  return RpcResponse{};
}

RpcResponse Supplicant::DoFsList(const FsListRequest& req) {
  FsListResponse out;
  std::error_code ec;
  for (auto it = std::filesystem::recursive_directory_iterator(store_root_, ec);
       !ec && it != std::filesystem::recursive_directory_iterator(); it.increment(ec)) {
    if (!it->is_regular_file(ec)) continue;
    std::string rel = std::filesystem::relative(it->path(), store_root_, ec).generic_string();
    if (ec) continue;
    if (rel.rfind(req.prefix, 0) == 0) out.names.push_back(std::move(rel));
  }
  std::sort(out.names.begin(), out.names.end());
  RpcResponse resp;
  resp.payload = std::move(out);
  return resp;
}

Result<TaManifestEntry> Supplicant::LoadTa(const Uuid& uuid) {
  RpcResponse resp = HandleRpc(LoadTaRequest{uuid});
  if (resp.code != kSuccess) return Result<TaManifestEntry>::Error(resp.code);
  return std::get<LoadTaResponse>(resp.payload).entry;
}

Result<FsOpenResponse> Supplicant::FsOpen(std::string_view name, bool create) {
  RpcResponse resp = HandleRpc(FsOpenRequest{std::string(name), create});
  if (resp.code != kSuccess) return Result<FsOpenResponse>::Error(resp.code);
  return std::get<FsOpenResponse>(resp.payload);
}

Result<std::vector<uint8_t>> Supplicant::FsRead(uint64_t file_id, uint64_t offset,
                                                uint64_t length) {
  RpcResponse resp = HandleRpc(FsReadRequest{file_id, offset, length});
  if (resp.code != kSuccess) return Result<std::vector<uint8_t>>::Error(resp.code);
  return std::move(std::get<FsReadResponse>(resp.payload).bytes);
}

uint32_t Supplicant::FsWrite(uint64_t file_id, uint64_t offset, std::span<const uint8_t> bytes) {
  return HandleRpc(FsWriteRequest{file_id, offset, {bytes.begin(), bytes.end()}}).code;
}

uint32_t Supplicant::FsRemove(std::string_view name) {
  return HandleRpc(FsRemoveRequest{std::string(name)}).code;
}

Result<std::vector<std::string>> Supplicant::FsList(std::string_view prefix) {
  RpcResponse resp = HandleRpc(FsListRequest{std::string(prefix)});
  if (resp.code != kSuccess) return Result<std::vector<std::string>>::Error(resp.code);
  return std::move(std::get<FsListResponse>(resp.payload).names);
}

}  // namespace teekv::supplicant
