// Copyright 2026 The vfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace vfl {

/// Unsigned 256-bit integer, little-endian 64-bit limbs.
struct U256 {
  std::array<std::uint64_t, 4> limbs{};

  constexpr U256() = default;
  constexpr explicit U256(std::uint64_t v) : limbs{v, 0, 0, 0} {}
  constexpr U256(std::uint64_t l0, std::uint64_t l1, std::uint64_t l2, std::uint64_t l3)
      : limbs{l0, l1, l2, l3} {}

  constexpr bool is_zero() const { return (limbs[0] | limbs[1] | limbs[2] | limbs[3]) == 0; }

  constexpr bool bit(unsigned i) const { return (limbs[i / 64] >> (i % 64)) & 1U; }

  constexpr unsigned bit_length() const {
    for (int i = 3; i >= 0; --i) {
      if (limbs[i] != 0) {
        unsigned n = 0;
        for (std::uint64_t v = limbs[i]; v != 0; v >>= 1) ++n;
        return static_cast<unsigned>(i) * 64 + n;
      }
    }
    return 0;
  }

  friend constexpr bool operator==(const U256&, const U256&) = default;

  friend constexpr std::strong_ordering operator<=>(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
      if (a.limbs[i] != b.limbs[i]) return a.limbs[i] <=> b.limbs[i];
    }
    return std::strong_ordering::equal;
  }

  /// Wrapping add; returns the carry-out.
  static constexpr std::uint64_t add_to(U256& a, const U256& b) {
    std::uint64_t carry = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint64_t s = a.limbs[i] + b.limbs[i];
      const std::uint64_t c1 = s < a.limbs[i];
      a.limbs[i] = s + carry;
      carry = c1 | (a.limbs[i] < s);
    }
    return carry;
  }

  /// Wrapping subtract; returns the borrow-out.
  static constexpr std::uint64_t sub_from(U256& a, const U256& b) {
    std::uint64_t borrow = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint64_t d = a.limbs[i] - b.limbs[i];
      const std::uint64_t b1 = a.limbs[i] < b.limbs[i];
      a.limbs[i] = d - borrow;
      borrow = b1 | (d < borrow);
    }
    return borrow;
  }

  constexpr U256 shr1() const {
    U256 r;
    for (int i = 0; i < 4; ++i) {
      r.limbs[i] = limbs[i] >> 1;
      if (i < 3) r.limbs[i] |= limbs[i + 1] << 63;
    }
    return r;
  }

  /// Parses decimal or 0x-prefixed hexadecimal; throws on bad digits or overflow.
  static U256 parse(std::string_view text);
  std::string to_decimal() const;
  std::string to_hex() const;  // 0x + 64 hex digits
};

constexpr U256 operator+(U256 a, const U256& b) {
  U256::add_to(a, b);
  return a;
}

constexpr U256 operator-(U256 a, const U256& b) {
  U256::sub_from(a, b);
  return a;
}

}  // namespace vfl
