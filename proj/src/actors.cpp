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

#include "vfl/actors.hpp"

#include <chrono>

#include "vfl/error.hpp"

namespace vfl::actors {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Signature CertificateAuthority::issue(const CurvePoint& device_key) {
  const Fr digest = public_key_digest(device_key);
  issued_.push_back(device_key);
  return eddsa_sign(root_.secret, digest);
}

DataSource::DataSource(std::shared_ptr<const std::vector<DataRecord>> records, bool cyclic, std::size_t offset)
    : records_(std::move(records)), cyclic_(cyclic), pos_(offset) {
  if (records_ == nullptr || records_->empty()) throw Error(ErrorCode::kEmptyInput, "data source without records");
  if (cyclic_) pos_ %= records_->size();
}

DataRecord DataSource::next() {
  if (pos_ >= records_->size()) throw Error(ErrorCode::kSourceExhausted, "data source drained");
  const DataRecord r = (*records_)[pos_++];
  if (cyclic_ && pos_ == records_->size()) pos_ = 0;
  return r;
}

std::size_t DataSource::remaining() const {
  if (cyclic_) return static_cast<std::size_t>(-1);
  return records_->size() - pos_;
}

LearningBatch Device::emit_batch(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kEmptyBatch, "emit_batch needs n >= 1");
  if (source_.remaining() < n) throw Error(ErrorCode::kSourceExhausted, "not enough records for a batch");
  LearningBatch batch;
  batch.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) batch.records.push_back(source_.next());
  batch.counter = counter_ + 1;
  batch.commitment = commit_records(batch.records);
  batch.signature = eddsa_sign(keys_.secret, batch_message(batch.commitment.root, batch.counter));
  counter_ = batch.counter;
  return batch;
}

Worker::Worker(std::string id, std::shared_ptr<const proof::ProofBackend> backend, ledger::Ledger& ledger,
               std::uint64_t salt_seed)
    : id_(std::move(id)), backend_(std::move(backend)), ledger_(ledger), salt_rng_(salt_seed) {}

void Worker::add_artifacts(const ProvingArtifacts& artifacts) {
  artifacts_.insert_or_assign(artifacts.circuit->label, artifacts);
}

std::size_t Worker::add_device(Device device) {
  devices_.push_back(std::move(device));
  return devices_.size() - 1;
}

const ProvingArtifacts& Worker::artifacts(const std::string& label) const {
  const auto it = artifacts_.find(label);
  if (it == artifacts_.end()) throw Error(ErrorCode::kKeyMismatch, "no proving key for " + label);
  return it->second;
}

const Fr& Worker::salt(std::size_t device_index) {
  auto it = salts_.find(device_index);
  if (it == salts_.end()) {
    const U256 v(salt_rng_(), salt_rng_(), salt_rng_(), salt_rng_() >> 8);
    it = salts_.emplace(device_index, Fr::from_u256(v)).first;
  }
  return it->second;
}

DeviceHandle Worker::handle(std::size_t device_index) {
  return device_handle(devices_.at(device_index).public_key(), salt(device_index));
}

ledger::Transaction Worker::prepare_registration(std::size_t device_index, const CurvePoint& root_key) {
  const Device& dev = devices_.at(device_index);
  const ProvingArtifacts& art = artifacts(std::string(circuits::kRegistrationLabel));
  const circuits::RegistrationWitnessInputs in{dev.public_key(), dev.certificate(), salt(device_index)};
  proof::Proof p = backend_->prove(art.key, *art.circuit, circuits::registration_public_inputs(root_key),
                                   circuits::registration_private_inputs(in));
  ledger::RegisterDevice payload;
  payload.handle = DeviceHandle{p.public_outputs.at(0)};
  payload.proof = std::move(p);
  payload.root_key = ledger::RootPublicKey{root_key};
  return ledger::Transaction{id_, std::move(payload)};
}

ledger::Receipt Worker::register_device(std::size_t device_index) {
  const auto root = ledger_.snapshot().anchored_root_key;
  if (!root) {
    ledger::Receipt r;
    r.reason = ledger::Rejection::kNoRootAnchored;
    return r;
  }
  return ledger_.submit(prepare_registration(device_index, root->point));
}

ledger::Transaction Worker::prepare_update(std::size_t device_index, const LearningBatch& batch,
                                           const ModelParams& global) {
  const std::string label = circuits::learning_label(batch.records.size());
  const ProvingArtifacts& art = artifacts(label);
  const DeviceHandle dh = handle(device_index);
  const circuits::LearningWitnessInputs in{&batch, devices_.at(device_index).public_key(), salt(device_index)};
  proof::Proof p = backend_->prove(art.key, *art.circuit, circuits::learning_public_inputs(dh, global),
                                   circuits::learning_private_inputs(in));
  const circuits::LearningOutputs out = circuits::decode_learning_outputs(p.public_outputs);
  ledger::SubmitUpdate payload;
  payload.vk_label = label;
  payload.proof = std::move(p);
  payload.handle = dh;
  payload.global_model = global;
  payload.local_model = out.local_model;
  payload.counter = out.counter;
  return ledger::Transaction{id_, std::move(payload)};
}

UpdateOutcome Worker::learning_round(std::size_t device_index, std::size_t batch_size) {
  UpdateOutcome outcome;
  const LearningBatch batch = devices_.at(device_index).emit_batch(batch_size);
  outcome.counter = batch.counter;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const ModelParams global = ledger_.get_latest_model();
    auto start = std::chrono::steady_clock::now();
    const ledger::Transaction tx = prepare_update(device_index, batch, global);
    outcome.prove_seconds += seconds_since(start);
    start = std::chrono::steady_clock::now();
    outcome.receipt = ledger_.submit(tx);
    outcome.submit_seconds += seconds_since(start);
    if (outcome.receipt.reason != ledger::Rejection::kStaleGlobalModel) break;
    outcome.retried = true;
  }
  return outcome;
}

}  // namespace vfl::actors
