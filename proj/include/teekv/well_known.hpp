// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_WELL_KNOWN_HPP_
#define TEEKV_WELL_KNOWN_HPP_

#include "teekv/uuid.hpp"

namespace teekv {

// "7465656b-7600-4b76-8000-000000000001"
inline constexpr Uuid kKvTaUuid{
    {0x74, 0x65, 0x65, 0x6b, 0x76, 0x00, 0x4b, 0x76, 0x80, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
     0x01}};

// "7465656b-7600-4b76-8000-000000000002"
inline constexpr Uuid kStatsPtaUuid{
    {0x74, 0x65, 0x65, 0x6b, 0x76, 0x00, 0x4b, 0x76, 0x80, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
     0x02}};

// "7465656b-7600-4b76-8000-000000000003"
inline constexpr Uuid kStorageTaUuid{
    {0x74, 0x65, 0x65, 0x6b, 0x76, 0x00, 0x4b, 0x76, 0x80, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
     0x03}};

inline constexpr const char* kDefaultDeviceName = "optee-emu";

}  // namespace teekv

#endif  // TEEKV_WELL_KNOWN_HPP_
