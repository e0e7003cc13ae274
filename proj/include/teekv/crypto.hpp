// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_CRYPTO_HPP_
#define TEEKV_CRYPTO_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace teekv::crypto {

inline constexpr size_t kHmacSha256Size = 32;
inline constexpr size_t kAeadKeySize = 32;
inline constexpr size_t kAeadNonceSize = 12;
inline constexpr size_t kAeadTagSize = 16;

std::array<uint8_t, kHmacSha256Size> HmacSha256(std::span<const uint8_t> key,
                                                std::span<const uint8_t> message);

struct Sealed {
  std::vector<uint8_t> ciphertext;
  std::array<uint8_t, kAeadTagSize> tag;
};

// AES-256-GCM.
Sealed AeadSeal(std::span<const uint8_t, kAeadKeySize> key,
                std::span<const uint8_t, kAeadNonceSize> nonce,
                std::span<const uint8_t> plaintext, std::span<const uint8_t> aad);

// Returns nullopt on authentication failure.
std::optional<std::vector<uint8_t>> AeadOpen(std::span<const uint8_t, kAeadKeySize> key,
                                             std::span<const uint8_t, kAeadNonceSize> nonce,
                                             std::span<const uint8_t> ciphertext,
                                             std::span<const uint8_t, kAeadTagSize> tag,
                                             std::span<const uint8_t> aad);

}  // namespace teekv::crypto

#endif  // TEEKV_CRYPTO_HPP_
