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

#include <cmath>
#include <cstdint>

#include "vfl/error.hpp"
#include "vfl/field.hpp"

namespace vfl {

inline constexpr int kFractionBits = 16;
inline constexpr std::int64_t kFixedOne = std::int64_t{1} << kFractionBits;
// Raw values live in [-kRawBound, kRawBound).
inline constexpr std::int64_t kRawBound = std::int64_t{1} << 31;
// Field embedding offset: a raw value r is carried in circuits as r + 2^31.
inline constexpr std::int64_t kFieldOffset = kRawBound;

/// Signed fixed-point number, real value = raw / 2^16.
struct Fixed {
  std::int64_t raw = 0;

  static constexpr bool in_range(std::int64_t r) { return r >= -kRawBound && r < kRawBound; }

  /// Throws Error(kOverflow) when `r` is outside the raw bound.
  static Fixed checked(std::int64_t r) {
    if (!in_range(r)) throw Error(ErrorCode::kOverflow, "fixed-point value out of range");
    return Fixed{r};
  }

  friend constexpr bool operator==(Fixed, Fixed) = default;
  friend constexpr auto operator<=>(Fixed, Fixed) = default;
};

/// raw = floor(x * 2^16). Throws Error(kRangeExceeded) unless |x| < 2^15.
inline Fixed encode_fixed(double x) {
  if (!(std::fabs(x) < 32768.0)) throw Error(ErrorCode::kRangeExceeded, "encode_fixed input");
  return Fixed{static_cast<std::int64_t>(std::floor(std::ldexp(x, kFractionBits)))};
}

inline double decode_fixed(Fixed f) { return std::ldexp(static_cast<double>(f.raw), -kFractionBits); }

/// (a * b) >> 16 with an arithmetic shift (floor toward -inf).
inline Fixed fixed_mul(Fixed a, Fixed b) { return Fixed::checked((a.raw * b.raw) >> kFractionBits); }

/// Floor division of a raw accumulator by a positive integer.
inline std::int64_t floor_div(std::int64_t n, std::int64_t d) {
  std::int64_t q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

/// Offset field encoding shared by commitments, circuits, and the ledger.
inline Fr to_field(Fixed f) { return Fr::from_u64(static_cast<std::uint64_t>(f.raw + kFieldOffset)); }

/// Inverse of to_field; throws Error(kRangeExceeded) for non-embeddings.
inline Fixed fixed_from_field(const Fr& f) {
  const U256 v = f.to_u256();
  if (v.limbs[1] != 0 || v.limbs[2] != 0 || v.limbs[3] != 0 ||
      v.limbs[0] >= static_cast<std::uint64_t>(2 * kRawBound)) {
    throw Error(ErrorCode::kRangeExceeded, "field element is not a fixed-point embedding");
  }
  return Fixed{static_cast<std::int64_t>(v.limbs[0]) - kFieldOffset};
}

}  // namespace vfl
