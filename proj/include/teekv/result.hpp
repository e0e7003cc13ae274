// Copyright 2026 The teekv Authors. All rights reserved.
// Use of this source code is governed by a BSD-style license that can be
// found in the LICENSE file.

#ifndef TEEKV_RESULT_HPP_
#define TEEKV_RESULT_HPP_

#include <cassert>
#include <optional>
#include <utility>

#include "teekv/codes.hpp"

namespace teekv {

// Value-or-code carrier for operations that produce something on success.
// Operations that produce nothing return a plain uint32_t code.
template <typename T>
class Result {
 public:
  Result(T value) : code_(kSuccess), value_(std::move(value)) {}

  static Result Error(uint32_t code) {
    assert(code != kSuccess);
    return Result(code);
  }

  bool ok() const { return code_ == kSuccess; }
  uint32_t code() const { return code_; }

  T& value() {
    assert(ok());
    return *value_;
  }
  const T& value() const {
    assert(ok());
    return *value_;
  }

  T take() {
    assert(ok());
    return std::move(*value_);
  }

 private:
  explicit Result(uint32_t code) : code_(code) {}

  uint32_t code_;
  std::optional<T> value_;
};

}  // namespace teekv

#endif  // TEEKV_RESULT_HPP_
