// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_UUID_HPP_
#define TEEKV_UUID_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teekv {

// 128-bit trusted-application identity. The canonical textual form is
// 8-4-4-4-12 lowercase hex; the text is the straight hex expansion of the
// 16 bytes in order.
class Uuid {
 public:
  constexpr Uuid() = default;
  explicit constexpr Uuid(const std::array<uint8_t, 16>& bytes) : bytes_(bytes) {}

  static std::optional<Uuid> Parse(std::string_view text);

  std::string ToString() const;
  std::span<const uint8_t, 16> bytes() const { return bytes_; }

  friend auto operator<=>(const Uuid&, const Uuid&) = default;

 private:
  std::array<uint8_t, 16> bytes_{};
};

std::string HexEncode(std::span<const uint8_t> bytes);
std::optional<std::vector<uint8_t>> HexDecode(std::string_view text);

}  // namespace teekv

template <>
struct std::hash<teekv::Uuid> {
  size_t operator()(const teekv::Uuid& u) const {
    uint64_t h = 1469598103934665603ull;
    for (uint8_t b : u.bytes()) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

#endif  // TEEKV_UUID_HPP_
