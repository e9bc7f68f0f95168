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

#include "vfl/proof_system.hpp"

#include "vfl/error.hpp"

namespace vfl::proof {

namespace {

constexpr std::uint16_t kFormatVersion = 1;

void write_digest(ByteWriter& w, const Digest& d) { w.bytes(d); }

Digest read_digest(ByteReader& r) {
  Digest d{};
  const auto b = r.bytes(d.size());
  std::copy(b.begin(), b.end(), d.begin());
  return d;
}

void expect_version(ByteReader& r) {
  if (r.u16() != kFormatVersion) throw Error(ErrorCode::kMalformedData, "unsupported format version");
}

void expect_done(const ByteReader& r) {
  if (!r.done()) throw Error(ErrorCode::kMalformedData, "trailing bytes");
}

}  // namespace

std::vector<std::uint8_t> VerificationKey::serialize() const {
  ByteWriter w;
  w.u16(kFormatVersion);
  write_digest(w, circuit_digest);
  w.str(backend);
  w.str(label);
  w.u32(num_public_inputs);
  w.u32(num_public_outputs);
  w.u32(static_cast<std::uint32_t>(payload.size()));
  w.bytes(payload);
  return w.take();
}

VerificationKey VerificationKey::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  expect_version(r);
  VerificationKey vk;
  vk.circuit_digest = read_digest(r);
  vk.backend = r.str();
  vk.label = r.str();
  vk.num_public_inputs = r.u32();
  vk.num_public_outputs = r.u32();
  const auto payload = r.bytes(r.u32());
  vk.payload.assign(payload.begin(), payload.end());
  expect_done(r);
  return vk;
}

std::vector<std::uint8_t> Proof::serialize() const {
  ByteWriter w;
  w.u16(kFormatVersion);
  write_digest(w, circuit_digest);
  w.str(backend);
  w.fields(payload);
  w.fields(public_outputs);
  return w.take();
}

Proof Proof::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  expect_version(r);
  Proof p;
  p.circuit_digest = read_digest(r);
  p.backend = r.str();
  p.payload = r.fields();
  p.public_outputs = r.fields();
  expect_done(r);
  return p;
}

KeyPair ReferenceBackend::setup(std::shared_ptr<const ConstraintSystem> cs) {
  const Digest digest = cs->digest();
  KeyPair keys;
  keys.proving = ProvingKey{std::string(kName), digest, cs->label, {}};
  keys.verification = VerificationKey{std::string(kName), digest, cs->label, cs->num_public_inputs,
                                      cs->num_public_outputs, {}};
  std::lock_guard lock(mu_);
  circuits_.try_emplace(digest, std::move(cs));
  return keys;
}

std::shared_ptr<const ConstraintSystem> ReferenceBackend::find(const Digest& digest) const {
  std::lock_guard lock(mu_);
  const auto it = circuits_.find(digest);
  return it == circuits_.end() ? nullptr : it->second;
}

Proof ReferenceBackend::prove(const ProvingKey& pk, const ConstraintSystem& cs, std::span<const Fr> public_inputs,
                              std::span<const Fr> private_inputs) const {
  if (pk.backend != kName) throw Error(ErrorCode::kKeyMismatch, "proving key from another backend");
  const auto stored = find(pk.circuit_digest);
  if (stored.get() != &cs && (stored == nullptr || cs.digest() != pk.circuit_digest)) {
    throw Error(ErrorCode::kKeyMismatch, "proving key does not belong to circuit " + cs.label);
  }
  const r1cs::Witness w = r1cs::synthesize_witness(cs, public_inputs, private_inputs);
  Proof p;
  p.backend = std::string(kName);
  p.circuit_digest = pk.circuit_digest;
  p.payload = r1cs::private_inputs(cs, w);
  p.public_outputs = r1cs::public_outputs(cs, w);
  return p;
}

bool ReferenceBackend::verify(const VerificationKey& vk, const Proof& proof,
                              std::span<const Fr> public_inputs) const noexcept {
  try {
    if (vk.backend != kName || proof.backend != kName) return false;
    if (proof.circuit_digest != vk.circuit_digest) return false;
    const auto cs = find(vk.circuit_digest);
    if (cs == nullptr) return false;
    if (vk.num_public_inputs != cs->num_public_inputs || vk.num_public_outputs != cs->num_public_outputs) {
      return false;
    }
    if (public_inputs.size() != cs->num_public_inputs || proof.public_outputs.size() != cs->num_public_outputs ||
        proof.payload.size() != cs->num_private_inputs) {
      return false;
    }
    std::vector<Fr> z(cs->num_variables());
    z[0] = Fr::one();
    std::size_t k = 1;
    for (const Fr& v : public_inputs) z[k++] = v;
    for (const Fr& v : proof.public_outputs) z[k++] = v;
    for (const Fr& v : proof.payload) z[k++] = v;
    r1cs::solve(*cs, z, /*keep_public=*/true);
    return !r1cs::first_violation(*cs, z).has_value();
  } catch (...) {
    return false;
  }
}

std::size_t ReferenceBackend::verification_cost(const VerificationKey& vk) const noexcept {
  const auto cs = find(vk.circuit_digest);
  return cs == nullptr ? 0 : cs->num_constraints();
}

}  // namespace vfl::proof
