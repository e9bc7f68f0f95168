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
#include <random>

#include "vfl/babyjubjub.hpp"
#include "vfl/field.hpp"
#include "vfl/u256.hpp"

namespace vfl {

using babyjubjub::CurvePoint;

/// EdDSA signature (R, S) with S < subgroup order.
struct Signature {
  CurvePoint r;
  U256 s;

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct KeyPair {
  SubgroupScalar secret;
  CurvePoint public_key;

  /// public = secret * base point. Throws Error(kRangeExceeded) for a zero secret.
  static KeyPair from_secret(const SubgroupScalar& secret);

  /// Draws a nonzero secret from `rng`.
  static KeyPair generate(std::mt19937_64& rng);
};

/// Poseidon over (R.x, R.y, A.x, A.y, msg).
Fr eddsa_challenge(const CurvePoint& r, const CurvePoint& a, const Fr& msg);

/// Deterministic signature; nonce r = Poseidon(sk, msg) mod subgroup order.
Signature eddsa_sign(const SubgroupScalar& secret, const Fr& msg);

/// Checks 8*S*B == 8*R + 8*H(R, A, msg)*A. Throws Error(kOffCurveInput) for an
/// off-curve public key; a malformed signature yields false.
bool eddsa_verify(const CurvePoint& public_key, const Fr& msg, const Signature& sig);

}  // namespace vfl
