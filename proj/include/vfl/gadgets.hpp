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
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vfl/babyjubjub.hpp"
#include "vfl/circuit_builder.hpp"
#include "vfl/commitments.hpp"
#include "vfl/fixed.hpp"
#include "vfl/u256.hpp"

namespace vfl::gadgets {

using r1cs::CircuitBuilder;
using r1cs::Lc;
using r1cs::Var;

/// Poseidon with the same input convention as poseidon_hash. Inputs that are
/// all constant fold to a constant.
Lc poseidon(CircuitBuilder& b, std::span<const Lc> inputs);
Lc poseidon(CircuitBuilder& b, std::initializer_list<Lc> inputs);

struct PointVar {
  Lc x;
  Lc y = Lc::constant(Fr::one());

  static PointVar constant(const babyjubjub::CurvePoint& p) {
    return PointVar{Lc::constant(p.x), Lc::constant(p.y)};
  }
};

void assert_on_curve(CircuitBuilder& b, const PointVar& p);
void assert_equal(CircuitBuilder& b, const PointVar& p, const PointVar& q);

/// Complete twisted-Edwards addition (6 constraints for variable operands).
PointVar point_add(CircuitBuilder& b, const PointVar& p, const PointVar& q);
PointVar point_double(CircuitBuilder& b, const PointVar& p);
/// bit ? p : identity, for a boolean `bit`.
PointVar point_select(CircuitBuilder& b, Var bit, const PointVar& p);
PointVar mul_by_cofactor(CircuitBuilder& b, const PointVar& p);

/// k*P over little-endian boolean bits of k, MSB first.
PointVar scalar_mul(CircuitBuilder& b, std::span<const Var> bits, const PointVar& p);
/// k*P for a constant P using its precomputed doublings.
PointVar fixed_base_mul(CircuitBuilder& b, std::span<const Var> bits, const babyjubjub::CurvePoint& p);

/// EdDSA verification: constrains 8*S*B == 8*(R + H*A) with
/// H = Poseidon(R.x, R.y, A.x, A.y, msg), A and R on the curve and S below
/// the subgroup order.
void eddsa_verify(CircuitBuilder& b, const PointVar& public_key, const Lc& msg, const PointVar& r,
                  const Lc& s);

/// Root of the zero-padded Poseidon tree of the given depth.
Lc merkle_root(CircuitBuilder& b, std::span<const Lc> leaves, std::size_t depth);

// Fixed-point values travel through these gadgets as signed field elements
// (negative raw values wrap around the modulus).

/// Constrains a signed value to [-2^31, 2^31).
void range_check_fixed(CircuitBuilder& b, const Lc& signed_value);
/// Signed raw value of an offset encoding, constraining it to 32 bits.
Lc decode_offset(CircuitBuilder& b, const Lc& encoded);
inline Lc encode_offset(const Lc& signed_value) { return signed_value + Fr::from_u64(kFieldOffset); }

/// floor(a*b / 2^16), range-checked.
Lc fixed_mul(CircuitBuilder& b, const Lc& a, const Lc& c);
/// floor(n / d) for a positive constant d, range-checked.
Lc floor_div(CircuitBuilder& b, const Lc& n, std::uint64_t d);

/// Signed model in circuit form.
struct ModelVars {
  std::array<std::array<Lc, kNumFeatures>, kNumClasses> weights;
  std::array<Lc, kNumClasses> biases;
};

/// Record in circuit form: signed features and the raw label.
struct RecordVars {
  std::array<Lc, kNumFeatures> features;
  Lc label;
};

/// One gradient step with the native rounding rules; `lr` is a circuit
/// constant. Returns the signed updated model.
ModelVars local_learn(CircuitBuilder& b, const ModelVars& global, std::span<const RecordVars> records,
                      Fixed lr);

}  // namespace vfl::gadgets
