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

#include "vfl/u256.hpp"

#include <algorithm>
#include <stdexcept>

#include "vfl/error.hpp"
#include "vfl/field.hpp"

namespace vfl {

namespace {

using u128 = unsigned __int128;

// a = a * m + add; returns true on overflow past 256 bits.
bool mul_small_add(U256& a, std::uint64_t m, std::uint64_t add) {
  std::uint64_t carry = add;
  for (auto& limb : a.limbs) {
    const u128 cur = static_cast<u128>(limb) * m + carry;
    limb = static_cast<std::uint64_t>(cur);
    carry = static_cast<std::uint64_t>(cur >> 64);
  }
  return carry != 0;
}

std::uint64_t div_small(U256& a, std::uint64_t d) {
  u128 rem = 0;
  for (int i = 3; i >= 0; --i) {
    const u128 cur = (rem << 64) | a.limbs[i];
    a.limbs[i] = static_cast<std::uint64_t>(cur / d);
    rem = cur % d;
  }
  return static_cast<std::uint64_t>(rem);
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kOffCurveInput: return "OffCurveInput";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kRangeExceeded: return "RangeExceeded";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kUnsatisfiableInputs: return "UnsatisfiableInputs";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kKeyMismatch: return "KeyMismatch";
    case ErrorCode::kSourceExhausted: return "SourceExhausted";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kTooFewClasses: return "TooFewClasses";
    case ErrorCode::kMalformedData: return "MalformedData";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Unknown";
}

U256 U256::parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kMalformedData, "empty integer literal");
  U256 v;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    for (char c : text.substr(2)) {
      const int d = hex_digit(c);
      if (d < 0 || mul_small_add(v, 16, static_cast<std::uint64_t>(d))) {
        throw Error(ErrorCode::kMalformedData, "bad hex literal: " + std::string(text));
      }
    }
    return v;
  }
  for (char c : text) {
    if (c < '0' || c > '9' || mul_small_add(v, 10, static_cast<std::uint64_t>(c - '0'))) {
      throw Error(ErrorCode::kMalformedData, "bad decimal literal: " + std::string(text));
    }
  }
  return v;
}

std::string U256::to_decimal() const {
  if (is_zero()) return "0";
  U256 v = *this;
  std::string out;
  while (!v.is_zero()) out.push_back(static_cast<char>('0' + div_small(v, 10)));
  std::reverse(out.begin(), out.end());
  return out;
}

std::string U256::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "0x";
  for (int i = 63; i >= 0; --i) {
    out.push_back(kDigits[(limbs[static_cast<std::size_t>(i) / 16] >> (4 * (i % 16))) & 0xF]);
  }
  return out;
}

bool to_signed(const Fr& value, __int128& out) {
  static const U256 kBound(0, 1ULL << 62, 0, 0);  // 2^126
  const U256 v = value.to_u256();
  if (v < kBound) {
    out = static_cast<__int128>((static_cast<u128>(v.limbs[1]) << 64) | v.limbs[0]);
    return true;
  }
  const U256 n = Fr::kModulus - v;
  if (n < kBound) {
    out = -static_cast<__int128>((static_cast<u128>(n.limbs[1]) << 64) | n.limbs[0]);
    return true;
  }
  return false;
}

Fr from_signed(__int128 value) {
  const bool negative = value < 0;
  const u128 mag = negative ? static_cast<u128>(-(value + 1)) + 1 : static_cast<u128>(value);
  const Fr f = Fr::from_u256(U256(static_cast<std::uint64_t>(mag),
                                  static_cast<std::uint64_t>(mag >> 64), 0, 0));
  return negative ? -f : f;
}

}  // namespace vfl
