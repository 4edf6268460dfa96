// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace chigad {

/// 64-bit FNV-1a. Stable across platforms, used for schema fingerprints.
class Fnv1a {
 public:
  Fnv1a& add(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= kPrime;
    }
    return *this;
  }

  Fnv1a& add(std::int64_t value) {
    for (int i = 0; i < 8; ++i) {
      state_ ^= static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i));
      state_ *= kPrime;
    }
    return *this;
  }

  std::uint64_t value() const { return state_; }

 private:
  static constexpr std::uint64_t kOffset = 14695981039346656037ULL;
  static constexpr std::uint64_t kPrime = 1099511628211ULL;
  std::uint64_t state_ = kOffset;
};

}  // namespace chigad
