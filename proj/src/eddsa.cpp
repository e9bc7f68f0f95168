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

#include "vfl/eddsa.hpp"

#include "vfl/error.hpp"
#include "vfl/poseidon.hpp"

namespace vfl {

namespace bj = babyjubjub;

namespace {

SubgroupScalar fr_to_scalar(const Fr& f) { return SubgroupScalar::from_u256(f.to_u256()); }

}  // namespace

KeyPair KeyPair::from_secret(const SubgroupScalar& secret) {
  if (secret.is_zero()) throw Error(ErrorCode::kRangeExceeded, "zero secret key");
  return KeyPair{secret, bj::scalar_mul(secret.to_u256(), bj::base_point())};
}

KeyPair KeyPair::generate(std::mt19937_64& rng) {
  for (;;) {
    U256 v(rng(), rng(), rng(), rng());
    const SubgroupScalar s = SubgroupScalar::from_u256(v);
    if (!s.is_zero()) return from_secret(s);
  }
}

Fr eddsa_challenge(const CurvePoint& r, const CurvePoint& a, const Fr& msg) {
  return poseidon_hash({r.x, r.y, a.x, a.y, msg});
}

Signature eddsa_sign(const SubgroupScalar& secret, const Fr& msg) {
  const Fr sk_field = Fr::from_u256(secret.to_u256());
  const SubgroupScalar nonce = fr_to_scalar(poseidon_hash({sk_field, msg}));
  const CurvePoint a = bj::scalar_mul(secret.to_u256(), bj::base_point());
  const CurvePoint r = bj::scalar_mul(nonce.to_u256(), bj::base_point());
  const SubgroupScalar h = fr_to_scalar(eddsa_challenge(r, a, msg));
  return Signature{r, (nonce + h * secret).to_u256()};
}

bool eddsa_verify(const CurvePoint& public_key, const Fr& msg, const Signature& sig) {
  if (!bj::on_curve(public_key)) throw Error(ErrorCode::kOffCurveInput, "eddsa public key");
  if (!bj::on_curve(sig.r) || sig.s >= bj::kSubgroupOrder) return false;
  const U256 h = eddsa_challenge(sig.r, public_key, msg).to_u256();
  const CurvePoint lhs = bj::mul_by_cofactor(bj::scalar_mul(sig.s, bj::base_point()));
  const CurvePoint rhs = bj::mul_by_cofactor(
      bj::detail::add_unchecked(sig.r, bj::scalar_mul(h, public_key)));
  return lhs == rhs;
}

}  // namespace vfl
