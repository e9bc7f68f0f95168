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
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vfl/circuits.hpp"
#include "vfl/commitments.hpp"
#include "vfl/eddsa.hpp"
#include "vfl/ledger.hpp"
#include "vfl/learner.hpp"
#include "vfl/proof_system.hpp"

namespace vfl::actors {

class CertificateAuthority {
 public:
  explicit CertificateAuthority(vfl::KeyPair root) : root_(root) {}

  const CurvePoint& root_public_key() const { return root_.public_key; }

  /// Signs Poseidon(dk.x, dk.y). Throws Error(kOffCurveInput).
  Signature issue(const CurvePoint& device_key);

  const std::vector<CurvePoint>& issued() const { return issued_; }

 private:
  vfl::KeyPair root_;
  std::vector<CurvePoint> issued_;
};

/// Record stream behind a device. A cyclic source wraps around; a finite
/// one throws Error(kSourceExhausted) once drained.
class DataSource {
 public:
  DataSource(std::shared_ptr<const std::vector<DataRecord>> records, bool cyclic, std::size_t offset = 0);

  DataRecord next();
  std::size_t remaining() const;

 private:
  std::shared_ptr<const std::vector<DataRecord>> records_;
  bool cyclic_;
  std::size_t pos_;
};

class Device {
 public:
  Device(vfl::KeyPair keys, Signature certificate, DataSource source)
      : keys_(keys), certificate_(certificate), source_(std::move(source)) {}

  const CurvePoint& public_key() const { return keys_.public_key; }
  const Signature& certificate() const { return certificate_; }
  /// Counter of the last emitted batch; 0 before the first.
  std::uint64_t counter() const { return counter_; }

  /// Commits to the next `n` records, increments the counter and signs
  /// (root, counter). Throws Error(kEmptyBatch) or Error(kSourceExhausted);
  /// the counter is unchanged on failure.
  LearningBatch emit_batch(std::size_t n);

 private:
  vfl::KeyPair keys_;
  Signature certificate_;
  DataSource source_;
  std::uint64_t counter_ = 0;
};

/// Circuit plus its proving key, as distributed by the task initiator.
struct ProvingArtifacts {
  std::shared_ptr<const r1cs::ConstraintSystem> circuit;
  proof::ProvingKey key;
};

struct UpdateOutcome {
  ledger::Receipt receipt;
  std::uint64_t counter = 0;
  double prove_seconds = 0;
  double submit_seconds = 0;
  bool retried = false;
};

/// Distrusted node: hosts devices, proves, and submits. Never puts records,
/// device keys or salts into a transaction.
class Worker {
 public:
  Worker(std::string id, std::shared_ptr<const proof::ProofBackend> backend, ledger::Ledger& ledger,
         std::uint64_t salt_seed);

  const std::string& id() const { return id_; }

  void add_artifacts(const ProvingArtifacts& artifacts);
  std::size_t add_device(Device device);
  std::size_t num_devices() const { return devices_.size(); }
  Device& device(std::size_t index) { return devices_.at(index); }

  /// One salt per device, drawn on first use and reused afterwards.
  const Fr& salt(std::size_t device_index);
  DeviceHandle handle(std::size_t device_index);

  /// Proves the registration circuit for the device. Throws
  /// UnsatisfiableInputs for an invalid certificate.
  ledger::Transaction prepare_registration(std::size_t device_index, const CurvePoint& root_key);
  ledger::Receipt register_device(std::size_t device_index);

  /// Proves the learning circuit for `batch` against `global`. Throws
  /// UnsatisfiableInputs when the batch does not match its signature.
  ledger::Transaction prepare_update(std::size_t device_index, const LearningBatch& batch,
                                     const ModelParams& global);

  /// Fetches the latest model, emits a batch, proves and submits; on
  /// StaleGlobalModel retries once against the refreshed model.
  UpdateOutcome learning_round(std::size_t device_index, std::size_t batch_size);

 private:
  const ProvingArtifacts& artifacts(const std::string& label) const;

  std::string id_;
  std::shared_ptr<const proof::ProofBackend> backend_;
  ledger::Ledger& ledger_;
  std::mt19937_64 salt_rng_;
  std::map<std::string, ProvingArtifacts> artifacts_;
  std::vector<Device> devices_;
  std::map<std::size_t, Fr> salts_;
};

}  // namespace vfl::actors
