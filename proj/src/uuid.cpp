// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#include "teekv/uuid.hpp"

#include <cstdio>

#include "teekv/codes.hpp"

namespace teekv {

namespace {

int HexNibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::optional<Uuid> Uuid::Parse(std::string_view text) {
  // 8-4-4-4-12 with dashes at fixed positions.
  if (text.size() != 36) return std::nullopt;
  std::array<uint8_t, 16> bytes{};
  size_t out = 0;
  for (size_t i = 0; i < text.size();) {
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (text[i] != '-') return std::nullopt;
      ++i;
      continue;
    }
    int hi = HexNibble(text[i]);
    int lo = HexNibble(text[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    bytes[out++] = static_cast<uint8_t>((hi << 4) | lo);
    i += 2;
  }
  return Uuid(bytes);
}

std::string Uuid::ToString() const {
  char buf[37];
  std::snprintf(buf, sizeof(buf),
                "%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x", bytes_[0],
                bytes_[1], bytes_[2], bytes_[3], bytes_[4], bytes_[5], bytes_[6], bytes_[7],
                bytes_[8], bytes_[9], bytes_[10], bytes_[11], bytes_[12], bytes_[13], bytes_[14],
                bytes_[15]);
  return std::string(buf, 36);
}

std::string HexEncode(std::span<const uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::optional<std::vector<uint8_t>> HexDecode(std::string_view text) {
  if (text.size() % 2 != 0) return std::nullopt;
  std::vector<uint8_t> out;
  out.reserve(text.size() / 2);
  for (size_t i = 0; i < text.size(); i += 2) {
    int hi = HexNibble(text[i]);
    int lo = HexNibble(text[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return out;
}

std::string_view CodeName(uint32_t code) {
  switch (code) {
    case kSuccess:
      return "Success";
    case kAccessDenied:
      return "AccessDenied";
    case kAccessConflict:
      return "AccessConflict";
    case kStaleHandle:
      return "StaleHandle";
    case kBadParameters:
      return "BadParameters";
    case kItemNotFound:
      return "ItemNotFound";
    case kUnknownDevice:
      return "UnknownDevice";
    case kDuplicateUuid:
      return "DuplicateUuid";
    case kOutOfMemory:
      return "OutOfMemory";
    case kIoError:
      return "IoError";
    case kPathViolation:
      return "PathViolation";
    case kShortBuffer:
      return "ShortBuffer";
    case kConfigError:
      return "ConfigError";
    case kTaNotFound:
      return "TaNotFound";
    case kTargetDead:
      return "TargetDead";
    case kQuotaExceeded:
      return "QuotaExceeded";
    case kCorruptObject:
      return "CorruptObject";
    default:
      return "Unknown";
  }
}

}  // namespace teekv
