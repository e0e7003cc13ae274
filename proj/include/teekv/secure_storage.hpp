// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_SECURE_STORAGE_HPP_
#define TEEKV_SECURE_STORAGE_HPP_

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teekv/codes.hpp"
#include "teekv/crypto.hpp"
#include "teekv/result.hpp"
#include "teekv/rng.hpp"
#include "teekv/supplicant.hpp"
#include "teekv/uuid.hpp"

namespace teekv::storage {

// Trusted-storage service: hierarchical key derivation (HUK -> SSK -> TSK,
// per-object FEK), authenticated encryption of whole objects, chunked cursor
// access, persistence through the supplicant.

inline constexpr size_t kKeySize = 32;
inline constexpr size_t kMaxObjectIdSize = 64;
inline constexpr size_t kMaxChunkSize = 1024;
inline constexpr size_t kObjectQuota = 1024 * 1024;  // per-object data cap

// On-disk object layout, little-endian:
//   magic "TKV1" (4) | version u8 (1) | ta uuid (16) | fek_nonce (12) |
//   wrapped_fek ct+tag (48) | data_nonce (12) | ciphertext (data_len) | tag (16)
// data_len is implied by the file size.
inline constexpr std::array<uint8_t, 4> kObjectMagic = {'T', 'K', 'V', '1'};
inline constexpr uint8_t kObjectVersion = 1;
inline constexpr size_t kObjectHeaderSize = 4 + 1 + 16 + 12 + (32 + 16) + 12;  // 93
inline constexpr size_t kObjectEnvelopeSize = kObjectHeaderSize + crypto::kAeadTagSize;  // 109

struct Huk {
  enum class Source { kProvisioned, kStaticFallback };

  std::array<uint8_t, kKeySize> bytes{};
  Source source = Source::kStaticFallback;

  // 32-byte zero-padded ASCII "static-huk-fallback".
  static Huk StaticFallback();
};

struct Ssk {
  std::array<uint8_t, kKeySize> bytes{};
};

struct Tsk {
  std::array<uint8_t, kKeySize> bytes{};
  Uuid ta;
};

// SSK = HMAC-SHA256(key = HUK, message = ASCII "ssk-derivation-v1")
inline constexpr std::string_view kSskDerivationMessage = "ssk-derivation-v1";
Ssk DeriveSsk(const Huk& huk);

// TSK = HMAC-SHA256(key = SSK, message = TA UUID bytes)
Tsk DeriveTsk(const Ssk& ssk, const Uuid& ta);

class StorageService;

// An open persistent object. The decrypted data is cached in TEE memory
// while open; writes are write-through (re-encrypt and flush on every
// write_chunk). Move-only; invalidated by Remove().
class PersistentObject {
 public:
  PersistentObject(PersistentObject&&) noexcept;
  PersistentObject& operator=(PersistentObject&&) noexcept;
  PersistentObject(const PersistentObject&) = delete;
  PersistentObject& operator=(const PersistentObject&) = delete;
  ~PersistentObject();

  // Returns min(len, size - cursor) bytes from the cursor and advances it.
  // A short read at the end is not an error. len must be <= 1024.
  Result<std::vector<uint8_t>> ReadChunk(size_t len);

  // Overwrites/extends at the cursor, advances it, re-encrypts and flushes.
  // bytes.size() must be <= 1024.
  uint32_t WriteChunk(std::span<const uint8_t> bytes);

  // cursor = pos; pos must be <= size().
  uint32_t Seek(size_t pos);

  // Removes the backing file; the object becomes unusable.
  uint32_t Remove();

  size_t size() const { return data_.size(); }
  size_t cursor() const { return cursor_; }
  const Uuid& ta() const { return ta_; }
  const std::vector<uint8_t>& object_id() const { return object_id_; }

 private:
  friend class StorageService;
  PersistentObject() = default;

  uint32_t Flush();

  StorageService* service_ = nullptr;
  Uuid ta_;
  std::vector<uint8_t> object_id_;
  std::string file_name_;
  uint64_t file_id_ = 0;

  std::array<uint8_t, kKeySize> fek_{};
  std::array<uint8_t, crypto::kAeadNonceSize> fek_nonce_{};
  std::array<uint8_t, 48> wrapped_fek_{};  // ciphertext (32) + tag (16)

  std::vector<uint8_t> data_;  // decrypted cache
  size_t cursor_ = 0;
  bool closed_ = false;
};

class StorageService {
 public:
  StorageService(Huk huk, supplicant::Supplicant& supplicant, uint64_t prng_seed);

  StorageService(const StorageService&) = delete;
  StorageService& operator=(const StorageService&) = delete;

  // Fresh FEK from the PRNG, object encrypted and flushed. Fails with
  // kAccessConflict if the id already exists for this TA.
  Result<PersistentObject> Create(const Uuid& ta, std::span<const uint8_t> object_id,
                                  std::span<const uint8_t> initial);

  // Unwraps the FEK under this TA's TSK and authenticates the whole object.
  // Another TA's objects are invisible: kItemNotFound.
  Result<PersistentObject> Open(const Uuid& ta, std::span<const uint8_t> object_id);

  const Ssk& ssk() const { return ssk_; }
  Tsk TskFor(const Uuid& ta) const { return DeriveTsk(ssk_, ta); }

  static std::string ObjectFileName(const Uuid& ta, std::span<const uint8_t> object_id);

 private:
  friend class PersistentObject;

  std::vector<uint8_t> EncodeObject(const PersistentObject& obj);
  void FillRandom(std::span<uint8_t> out);

  supplicant::Supplicant& supplicant_;
  Ssk ssk_;
  std::mutex rng_mu_;
  Rng rng_;
};

}  // namespace teekv::storage

#endif  // TEEKV_SECURE_STORAGE_HPP_
