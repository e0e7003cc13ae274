// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.
//
// Independent HMAC-SHA256 used to cross-check the key-derivation path. The
// SHA-256 compression function is implemented here from the FIPS 180-4
// constants; nothing is shared with the library's crypto backend.

#ifndef TEEKV_TESTS_SUPPORT_HMAC_ORACLE_HPP_
#define TEEKV_TESTS_SUPPORT_HMAC_ORACLE_HPP_

#include <array>
#include <cstdint>
#include <span>

namespace teekv::testing {

std::array<uint8_t, 32> OracleSha256(std::span<const uint8_t> message);
std::array<uint8_t, 32> OracleHmacSha256(std::span<const uint8_t> key,
                                         std::span<const uint8_t> message);

}  // namespace teekv::testing

#endif  // TEEKV_TESTS_SUPPORT_HMAC_ORACLE_HPP_
