// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <cstring>
#include <memory>
#include <stdexcept>

namespace teekv::crypto {

namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

[[noreturn]] void ThrowOpenSslFailure(const char* what) {
  throw std::runtime_error(std::string("openssl failure in ") + what);
}

}  // namespace

std::array<uint8_t, kHmacSha256Size> HmacSha256(std::span<const uint8_t> key,
                                                std::span<const uint8_t> message) {
  std::array<uint8_t, kHmacSha256Size> out{};
  unsigned int out_len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), message.data(), message.size(),
           out.data(), &out_len) == nullptr ||
      out_len != kHmacSha256Size) {
    ThrowOpenSslFailure("HMAC");
  }
  return out;
}

Sealed AeadSeal(std::span<const uint8_t, kAeadKeySize> key,
                std::span<const uint8_t, kAeadNonceSize> nonce,
                std::span<const uint8_t> plaintext, std::span<const uint8_t> aad) {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) ThrowOpenSslFailure("EVP_CIPHER_CTX_new");

  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1) {
    ThrowOpenSslFailure("EncryptInit");
  }

  int len = 0;
  if (!aad.empty() &&
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
    ThrowOpenSslFailure("EncryptUpdate aad");
  }

  Sealed sealed;
  sealed.ciphertext.resize(plaintext.size());
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), sealed.ciphertext.data(), &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1) {
    ThrowOpenSslFailure("EncryptUpdate");
  }
  uint8_t dummy[16];
  if (EVP_EncryptFinal_ex(ctx.get(), dummy, &len) != 1) {
    ThrowOpenSslFailure("EncryptFinal");
  }
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kAeadTagSize, sealed.tag.data()) != 1) {
    ThrowOpenSslFailure("GET_TAG");
  }
  return sealed;
}

std::optional<std::vector<uint8_t>> AeadOpen(std::span<const uint8_t, kAeadKeySize> key,
                                             std::span<const uint8_t, kAeadNonceSize> nonce,
                                             std::span<const uint8_t> ciphertext,
                                             std::span<const uint8_t, kAeadTagSize> tag,
                                             std::span<const uint8_t> aad) {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) ThrowOpenSslFailure("EVP_CIPHER_CTX_new");

  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()) != 1) {
    ThrowOpenSslFailure("DecryptInit");
  }

  int len = 0;
  if (!aad.empty() &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1) {
    ThrowOpenSslFailure("DecryptUpdate aad");
  }

  std::vector<uint8_t> plaintext(ciphertext.size());
  if (!ciphertext.empty() &&
      EVP_DecryptUpdate(ctx.get(), plaintext.data(), &len, ciphertext.data(),
                        static_cast<int>(ciphertext.size())) != 1) {
    return std::nullopt;
  }

  uint8_t tag_copy[kAeadTagSize];
  std::memcpy(tag_copy, tag.data(), kAeadTagSize);
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kAeadTagSize, tag_copy) != 1) {
    ThrowOpenSslFailure("SET_TAG");
  }

  uint8_t dummy[16];
  if (EVP_DecryptFinal_ex(ctx.get(), dummy, &len) != 1) {
    return std::nullopt;  // authentication failed
  }
  return plaintext;
}

}  // namespace teekv::crypto
