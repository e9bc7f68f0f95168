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

#include <cstdint>

#include "vfl/field.hpp"
#include "vfl/u256.hpp"

namespace vfl::babyjubjub {

// Twisted Edwards form a*x^2 + y^2 = 1 + d*x^2*y^2 over Fr.
inline constexpr std::uint64_t kA = 168700;
inline constexpr std::uint64_t kD = 168696;

/// Prime order of the subgroup generated by base_point().
inline constexpr U256 kSubgroupOrder = BabyJubjubOrderParams::kModulus;
inline constexpr unsigned kCofactor = 8;

struct CurvePoint {
  Fr x;
  Fr y = Fr::one();

  static CurvePoint identity() { return CurvePoint{}; }

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

bool on_curve(const CurvePoint& p);

/// Generator of the prime-order subgroup (circomlib "Base8").
const CurvePoint& base_point();

CurvePoint negate(const CurvePoint& p);

/// Complete twisted-Edwards addition. Throws Error(kOffCurveInput) if either
/// operand is off the curve.
CurvePoint add(const CurvePoint& p, const CurvePoint& q);

/// k*P by MSB-first double-and-add over the bits of k. Throws
/// Error(kOffCurveInput) for an off-curve P.
CurvePoint scalar_mul(const U256& k, const CurvePoint& p);

/// Multiplies by the cofactor.
CurvePoint mul_by_cofactor(const CurvePoint& p);

namespace detail {
// Addition without the curve-membership check; used on hot paths where the
// operands are already known to be valid.
CurvePoint add_unchecked(const CurvePoint& p, const CurvePoint& q);
}  // namespace detail

}  // namespace vfl::babyjubjub
