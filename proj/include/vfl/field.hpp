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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "vfl/error.hpp"
#include "vfl/u256.hpp"

namespace vfl {

namespace detail {

using u128 = unsigned __int128;

// Montgomery constants derived from the modulus at compile time. The modulus
// must be odd and below 2^255.
template <class Params>
struct MontgomeryConstants {
  static constexpr U256 kModulus = Params::kModulus;

  static constexpr std::uint64_t compute_inv() {
    // Newton iteration for m^-1 mod 2^64, then negate.
    std::uint64_t inv = 1;
    for (int i = 0; i < 7; ++i) inv *= 2 - kModulus.limbs[0] * inv;
    return ~inv + 1;
  }

  static constexpr U256 mod_double(U256 a) {
    const std::uint64_t carry = U256::add_to(a, a);
    if (carry != 0 || a >= kModulus) U256::sub_from(a, kModulus);
    return a;
  }

  static constexpr U256 compute_r() {
    // 2^256 mod m, by doubling 1 two hundred fifty-six times.
    U256 r(1);
    for (int i = 0; i < 256; ++i) r = mod_double(r);
    return r;
  }

  static constexpr U256 compute_r2() {
    U256 r = compute_r();
    for (int i = 0; i < 256; ++i) r = mod_double(r);
    return r;
  }

  static constexpr std::uint64_t kInv = compute_inv();
  static constexpr U256 kR = compute_r();
  static constexpr U256 kR2 = compute_r2();
};

}  // namespace detail

/// Element of the prime field defined by `Params::kModulus`, stored in
/// Montgomery form. Always canonical (< modulus).
template <class Params>
class PrimeField {
  using K = detail::MontgomeryConstants<Params>;

 public:
  static constexpr U256 kModulus = Params::kModulus;

  constexpr PrimeField() = default;

  static PrimeField zero() { return PrimeField(); }
  static PrimeField one() { return from_raw_montgomery(K::kR); }

  static PrimeField from_u64(std::uint64_t v) { return from_u256(U256(v)); }

  static PrimeField from_i64(std::int64_t v) {
    if (v >= 0) return from_u64(static_cast<std::uint64_t>(v));
    return -from_u64(static_cast<std::uint64_t>(-(v + 1)) + 1);
  }

  /// Reduces any 256-bit integer modulo the field prime.
  static PrimeField from_u256(U256 v) {
    while (v >= kModulus) U256::sub_from(v, kModulus);
    PrimeField r;
    r.mont_ = mont_mul(v, K::kR2);
    return r;
  }

  /// Decimal or 0x-hex; the value is reduced modulo the prime.
  static PrimeField from_string(std::string_view text) { return from_u256(U256::parse(text)); }

  /// 32 big-endian bytes, reduced modulo the prime.
  static PrimeField from_bytes_be(std::span<const std::uint8_t, 32> bytes) {
    U256 v;
    for (std::size_t i = 0; i < 32; ++i) {
      v.limbs[3 - i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (7 - i % 8));
    }
    return from_u256(v);
  }

  U256 to_u256() const { return mont_mul(mont_, U256(1)); }

  std::array<std::uint8_t, 32> to_bytes_be() const {
    const U256 v = to_u256();
    std::array<std::uint8_t, 32> out{};
    for (std::size_t i = 0; i < 32; ++i) {
      out[i] = static_cast<std::uint8_t>(v.limbs[3 - i / 8] >> (8 * (7 - i % 8)));
    }
    return out;
  }

  std::string to_string() const { return to_u256().to_decimal(); }
  std::string to_hex() const { return to_u256().to_hex(); }

  bool is_zero() const { return mont_.is_zero(); }
  bool is_one() const { return mont_ == K::kR; }

  PrimeField& operator+=(const PrimeField& o) {
    const std::uint64_t carry = U256::add_to(mont_, o.mont_);
    if (carry != 0 || mont_ >= kModulus) U256::sub_from(mont_, kModulus);
    return *this;
  }

  PrimeField& operator-=(const PrimeField& o) {
    if (U256::sub_from(mont_, o.mont_) != 0) U256::add_to(mont_, kModulus);
    return *this;
  }

  PrimeField& operator*=(const PrimeField& o) {
    mont_ = mont_mul(mont_, o.mont_);
    return *this;
  }

  friend PrimeField operator+(PrimeField a, const PrimeField& b) { return a += b; }
  friend PrimeField operator-(PrimeField a, const PrimeField& b) { return a -= b; }
  friend PrimeField operator*(PrimeField a, const PrimeField& b) { return a *= b; }

  PrimeField operator-() const {
    PrimeField r;
    if (!is_zero()) r.mont_ = kModulus - mont_;
    return r;
  }

  PrimeField square() const { return *this * *this; }

  PrimeField pow(const U256& e) const {
    PrimeField result = one();
    for (int i = static_cast<int>(e.bit_length()) - 1; i >= 0; --i) {
      result = result.square();
      if (e.bit(static_cast<unsigned>(i))) result *= *this;
    }
    return result;
  }

  /// Throws Error(kDivisionByZero) for zero.
  PrimeField inverse() const {
    if (is_zero()) throw Error(ErrorCode::kDivisionByZero, "inverse of zero");
    return pow(kModulus - U256(2));
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

  /// Orders by canonical integer value.
  friend std::strong_ordering operator<=>(const PrimeField& a, const PrimeField& b) {
    return a.to_u256() <=> b.to_u256();
  }

  const U256& montgomery() const { return mont_; }

 private:
  static PrimeField from_raw_montgomery(const U256& m) {
    PrimeField r;
    r.mont_ = m;
    return r;
  }

  // CIOS Montgomery multiplication.
  static U256 mont_mul(const U256& a, const U256& b) {
    using detail::u128;
    std::uint64_t t[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      std::uint64_t carry = 0;
      for (int j = 0; j < 4; ++j) {
        const u128 cur = static_cast<u128>(a.limbs[j]) * b.limbs[i] + t[j] + carry;
        t[j] = static_cast<std::uint64_t>(cur);
        carry = static_cast<std::uint64_t>(cur >> 64);
      }
      u128 cur = static_cast<u128>(t[4]) + carry;
      t[4] = static_cast<std::uint64_t>(cur);
      t[5] = static_cast<std::uint64_t>(cur >> 64);

      const std::uint64_t m = t[0] * K::kInv;
      cur = static_cast<u128>(m) * kModulus.limbs[0] + t[0];
      carry = static_cast<std::uint64_t>(cur >> 64);
      for (int j = 1; j < 4; ++j) {
        cur = static_cast<u128>(m) * kModulus.limbs[j] + t[j] + carry;
        t[j - 1] = static_cast<std::uint64_t>(cur);
        carry = static_cast<std::uint64_t>(cur >> 64);
      }
      cur = static_cast<u128>(t[4]) + carry;
      t[3] = static_cast<std::uint64_t>(cur);
      t[4] = t[5] + static_cast<std::uint64_t>(cur >> 64);
    }
    U256 r(t[0], t[1], t[2], t[3]);
    if (t[4] != 0 || r >= kModulus) U256::sub_from(r, kModulus);
    return r;
  }

  U256 mont_;
};

struct Bn254ScalarParams {
  // 21888242871839275222246405745257275088548364400416034343698204186575808495617
  static constexpr U256 kModulus{0x43e1f593f0000001ULL, 0x2833e84879b97091ULL,
                                 0xb85045b68181585dULL, 0x30644e72e131a029ULL};
};

struct BabyJubjubOrderParams {
  // 2736030358979909402780800718157159386076813972158567259200215660948447373041
  static constexpr U256 kModulus{0x677297dc392126f1ULL, 0xab3eedb83920ee0aULL,
                                 0x370a08b6d0302b0bULL, 0x060c89ce5c263405ULL};
};

/// The alt_bn128 scalar field; every circuit value lives here.
using Fr = PrimeField<Bn254ScalarParams>;

/// Integers modulo the prime order of the babyjubjub base-point subgroup.
using SubgroupScalar = PrimeField<BabyJubjubOrderParams>;

/// Interprets a field element as a signed integer when it lies within
/// 2^126 of zero; returns false otherwise.
bool to_signed(const Fr& value, __int128& out);

/// Embeds a signed 128-bit integer.
Fr from_signed(__int128 value);

}  // namespace vfl

template <class Params>
struct std::hash<vfl::PrimeField<Params>> {
  std::size_t operator()(const vfl::PrimeField<Params>& f) const noexcept {
    const auto& l = f.montgomery().limbs;
    return static_cast<std::size_t>(l[0] ^ (l[1] * 0x9e3779b97f4a7c15ULL) ^ (l[2] << 7) ^ l[3]);
  }
};
