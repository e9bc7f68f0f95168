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

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vfl/binary_io.hpp"
#include "vfl/field.hpp"
#include "vfl/r1cs.hpp"

namespace vfl::proof {

using r1cs::ConstraintSystem;

struct ProvingKey {
  std::string backend;
  Digest circuit_digest{};
  std::string label;
  std::vector<std::uint8_t> payload;
};

struct VerificationKey {
  std::string backend;
  Digest circuit_digest{};
  std::string label;
  std::uint32_t num_public_inputs = 0;
  std::uint32_t num_public_outputs = 0;
  std::vector<std::uint8_t> payload;

  std::vector<std::uint8_t> serialize() const;
  /// Throws Error(kMalformedData).
  static VerificationKey deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const VerificationKey&, const VerificationKey&) = default;
};

struct Proof {
  std::string backend;
  Digest circuit_digest{};
  std::vector<Fr> payload;
  std::vector<Fr> public_outputs;

  std::vector<std::uint8_t> serialize() const;
  /// Throws Error(kMalformedData).
  static Proof deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const Proof&, const Proof&) = default;
};

struct KeyPair {
  ProvingKey proving;
  VerificationKey verification;
};

/// setup / prove / verify over a constraint system. Implementations are
/// safe to call concurrently.
class ProofBackend {
 public:
  virtual ~ProofBackend() = default;

  virtual std::string_view name() const = 0;

  virtual KeyPair setup(std::shared_ptr<const ConstraintSystem> cs) = 0;

  /// Throws Error(kKeyMismatch) when `pk` does not belong to `cs`, and
  /// UnsatisfiableInputs / Error(kArityMismatch) from witness synthesis.
  virtual Proof prove(const ProvingKey& pk, const ConstraintSystem& cs, std::span<const Fr> public_inputs,
                      std::span<const Fr> private_inputs) const = 0;

  /// False on any mismatch or malformed input; never throws.
  virtual bool verify(const VerificationKey& vk, const Proof& proof,
                      std::span<const Fr> public_inputs) const noexcept = 0;

  /// Constraints checked by one verification under `vk` (0 if unknown).
  virtual std::size_t verification_cost(const VerificationKey& vk) const noexcept = 0;
};

/// Not succinct and not zero-knowledge: the proof carries the private input
/// segment, and verification re-derives the auxiliary assignment with the
/// circuit's witness program and checks every constraint. Circuits are held
/// in a content-addressed store populated by setup().
class ReferenceBackend final : public ProofBackend {
 public:
  static constexpr std::string_view kName = "reference-r1cs";

  std::string_view name() const override { return kName; }
  KeyPair setup(std::shared_ptr<const ConstraintSystem> cs) override;
  Proof prove(const ProvingKey& pk, const ConstraintSystem& cs, std::span<const Fr> public_inputs,
              std::span<const Fr> private_inputs) const override;
  bool verify(const VerificationKey& vk, const Proof& proof,
              std::span<const Fr> public_inputs) const noexcept override;
  std::size_t verification_cost(const VerificationKey& vk) const noexcept override;

 private:
  std::shared_ptr<const ConstraintSystem> find(const Digest& digest) const;

  mutable std::mutex mu_;
  std::map<Digest, std::shared_ptr<const ConstraintSystem>> circuits_;
};

}  // namespace vfl::proof
