// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_STORAGE_TA_HPP_
#define TEEKV_STORAGE_TA_HPP_

#include "teekv/tee_core.hpp"

namespace teekv::storage_ta {

// Secure-storage exerciser TA. Each command handles one data size end to end
// inside the TEE; the data is generated from a seeded PRNG within the TA.
//
//   p0 Value in:  a = data size in bytes, b = chunk size (1..1024)
//   p1 Value in:  seed (lo/hi)
//   p2 Value out: a = chunk operations performed, b = FNV-1a 32 of the bytes
//                 processed (written for WRITE, read for READ, read||written
//                 for REWRITE)
//   p3 MemRef out (optional, READ only): receives the bytes read.
//
//   kCmdWrite:   (re)creates the object for this size and writes it in
//                chunks of at most the chunk size.
//   kCmdRead:    opens the object and reads it fully in chunks, verifying
//                the content against the seeded stream.
//   kCmdRewrite: opens, reads fully, resets the cursor, writes the data
//                back; chunk ops = read ops + write ops.
inline constexpr uint32_t kCmdWrite = 0;
inline constexpr uint32_t kCmdRead = 1;
inline constexpr uint32_t kCmdRewrite = 2;

// Object id used for a given size: "ss-<size>" ASCII.
std::vector<uint8_t> ObjectIdForSize(uint64_t size);

class StorageTa : public core::TrustedApp {
 public:
  uint32_t OnInvoke(core::TaServices& services, uint32_t command_id,
                    core::TaParams params) override;
};

uint32_t Fnv1a32(std::span<const uint8_t> bytes, uint32_t seed = 2166136261u);

}  // namespace teekv::storage_ta

#endif  // TEEKV_STORAGE_TA_HPP_
