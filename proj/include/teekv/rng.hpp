// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_RNG_HPP_
#define TEEKV_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>

namespace teekv {

// Seedable deterministic generator. Only the raw engine output is used
// (never <random> distributions), so a given seed yields the same stream on
// every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  static uint64_t EntropySeed() {
    std::random_device rd;
    return (static_cast<uint64_t>(rd()) << 32) ^ rd();
  }

  uint64_t Next() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0. Modulo reduction; the bias is
  // irrelevant at the bounds used here and the result is reproducible.
  uint64_t Below(uint64_t bound) { return engine_() % bound; }

  void Fill(std::span<uint8_t> out) {
    size_t i = 0;
    while (i < out.size()) {
      uint64_t w = engine_();
      for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
        out[i] = static_cast<uint8_t>(w >> (8 * k));
      }
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace teekv

#endif  // TEEKV_RNG_HPP_
