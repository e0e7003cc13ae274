// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_CODES_HPP_
#define TEEKV_CODES_HPP_

#include <cstdint>
#include <string_view>

namespace teekv {

// Flat 32-bit return-code space shared by the client API, the core and the
// trusted applications. 0 is success; everything else is an error. The four
// values marked (*) are the stable numeric contract tests rely on; the rest
// follow common TEE conventions but are normative for this project only.
inline constexpr uint32_t kSuccess = 0x00000000;
inline constexpr uint32_t kAccessDenied = 0xFFFF0001;
inline constexpr uint32_t kAccessConflict = 0xFFFF0003;
inline constexpr uint32_t kStaleHandle = 0xFFFF0004;
inline constexpr uint32_t kBadParameters = 0xFFFF0006;   // (*)
inline constexpr uint32_t kItemNotFound = 0xFFFF0008;    // (*)
inline constexpr uint32_t kUnknownDevice = 0xFFFF000A;
inline constexpr uint32_t kDuplicateUuid = 0xFFFF000B;
inline constexpr uint32_t kOutOfMemory = 0xFFFF000C;     // (*)
inline constexpr uint32_t kIoError = 0xFFFF000E;
inline constexpr uint32_t kPathViolation = 0xFFFF000F;
inline constexpr uint32_t kShortBuffer = 0xFFFF0010;
inline constexpr uint32_t kConfigError = 0xFFFF0011;
inline constexpr uint32_t kTaNotFound = 0xFFFF0012;
inline constexpr uint32_t kTargetDead = 0xFFFF3024;      // (*) TA panicked
inline constexpr uint32_t kQuotaExceeded = 0xFFFF3041;
inline constexpr uint32_t kCorruptObject = 0xF0100001;

std::string_view CodeName(uint32_t code);

enum class TaKind { kUser, kPseudo };

}  // namespace teekv

#endif  // TEEKV_CODES_HPP_
