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

#include "vfl/circuits.hpp"

#include "vfl/circuit_builder.hpp"
#include "vfl/gadgets.hpp"

namespace vfl::circuits {

using gadgets::Lc;
using gadgets::PointVar;
using r1cs::CircuitBuilder;
using r1cs::Var;

std::string learning_label(std::size_t batch_size) { return "learning/b" + std::to_string(batch_size); }

ConstraintSystem build_registration_circuit() {
  CircuitBuilder b{std::string(kRegistrationLabel)};
  const PointVar root{b.public_input(), b.public_input()};
  const Var handle = b.public_output();
  const PointVar device{b.private_input(), b.private_input()};
  const PointVar cert_r{b.private_input(), b.private_input()};
  const Var cert_s = b.private_input();
  const Var salt = b.private_input();

  const Lc digest = gadgets::poseidon(b, {device.x, device.y});
  gadgets::eddsa_verify(b, root, digest, cert_r, cert_s);
  b.bind_output(handle, gadgets::poseidon(b, {digest, salt}));
  return std::move(b).finalize();
}

std::vector<Fr> registration_public_inputs(const CurvePoint& root_key) { return {root_key.x, root_key.y}; }

std::vector<Fr> registration_private_inputs(const RegistrationWitnessInputs& in) {
  return {in.device_key.x, in.device_key.y, in.certificate.r.x, in.certificate.r.y,
          Fr::from_u256(in.certificate.s), in.salt};
}

ConstraintSystem build_learning_circuit(std::size_t batch_size, Fixed learning_rate) {
  if (batch_size == 0) throw Error(ErrorCode::kEmptyBatch, "learning circuit needs batch_size >= 1");
  CircuitBuilder b{learning_label(batch_size)};

  const Var handle = b.public_input();
  std::vector<Var> gm(ModelParams::kNumFields);
  for (Var& v : gm) v = b.public_input();
  const Var counter_out = b.public_output();
  std::vector<Var> lm(ModelParams::kNumFields);
  for (Var& v : lm) v = b.public_output();

  std::vector<std::array<Var, kRecordFields>> records(batch_size);
  for (auto& rec : records) {
    for (Var& v : rec) v = b.private_input();
  }
  const PointVar sig_r{b.private_input(), b.private_input()};
  const Var sig_s = b.private_input();
  const PointVar device{b.private_input(), b.private_input()};
  const Var salt = b.private_input();
  const Var counter = b.private_input();

  // Data authenticity: leaves, root, device signature over (root, counter).
  std::vector<Lc> leaves;
  leaves.reserve(batch_size);
  for (const auto& rec : records) {
    std::vector<Lc> fields(rec.begin(), rec.end());
    leaves.push_back(gadgets::poseidon(b, fields));
  }
  const Lc root = gadgets::merkle_root(b, leaves, merkle_depth(batch_size));
  const Lc message = gadgets::poseidon(b, {root, counter});
  gadgets::eddsa_verify(b, device, message, sig_r, sig_s);

  // Handle binding.
  const Lc digest = gadgets::poseidon(b, {device.x, device.y});
  b.enforce_equal(gadgets::poseidon(b, {digest, salt}), handle);

  // Learning.
  gadgets::ModelVars global;
  std::size_t k = 0;
  for (auto& row : global.weights) {
    for (Lc& w : row) w = gadgets::decode_offset(b, gm[k++]);
  }
  for (Lc& bias : global.biases) bias = gadgets::decode_offset(b, gm[k++]);

  std::vector<gadgets::RecordVars> inputs(batch_size);
  for (std::size_t r = 0; r < batch_size; ++r) {
    for (std::size_t j = 0; j < kNumFeatures; ++j) inputs[r].features[j] = gadgets::decode_offset(b, records[r][j]);
    inputs[r].label = records[r][kNumFeatures];
  }
  const gadgets::ModelVars local = gadgets::local_learn(b, global, inputs, learning_rate);

  k = 0;
  for (const auto& row : local.weights) {
    for (const Lc& w : row) b.bind_output(lm[k++], gadgets::encode_offset(w));
  }
  for (const Lc& bias : local.biases) b.bind_output(lm[k++], gadgets::encode_offset(bias));
  b.bind_output(lm[k], Lc(gm[k]) + Fr::one());
  b.bind_output(counter_out, counter);
  return std::move(b).finalize();
}

std::vector<Fr> learning_public_inputs(const DeviceHandle& handle, const ModelParams& global) {
  std::vector<Fr> out{handle.value};
  const std::vector<Fr> gm = global.to_fields();
  out.insert(out.end(), gm.begin(), gm.end());
  return out;
}

std::vector<Fr> learning_private_inputs(const LearningWitnessInputs& in) {
  const LearningBatch& batch = *in.batch;
  std::vector<Fr> out;
  out.reserve(batch.records.size() * kRecordFields + 7);
  for (const DataRecord& rec : batch.records) {
    const auto fields = rec.to_fields();
    out.insert(out.end(), fields.begin(), fields.end());
  }
  out.push_back(batch.signature.r.x);
  out.push_back(batch.signature.r.y);
  out.push_back(Fr::from_u256(batch.signature.s));
  out.push_back(in.device_key.x);
  out.push_back(in.device_key.y);
  out.push_back(in.salt);
  out.push_back(Fr::from_u64(batch.counter));
  return out;
}

std::vector<Fr> learning_public_outputs(const LearningOutputs& out) {
  std::vector<Fr> fields{Fr::from_u64(out.counter)};
  const std::vector<Fr> lm = out.local_model.to_fields();
  fields.insert(fields.end(), lm.begin(), lm.end());
  return fields;
}

LearningOutputs decode_learning_outputs(std::span<const Fr> outputs) {
  if (outputs.size() != 1 + ModelParams::kNumFields) {
    throw Error(ErrorCode::kLengthMismatch, "learning outputs must hold counter and 61 model fields");
  }
  const U256 c = outputs[0].to_u256();
  if (c.limbs[1] != 0 || c.limbs[2] != 0 || c.limbs[3] != 0) {
    throw Error(ErrorCode::kRangeExceeded, "batch counter");
  }
  return LearningOutputs{c.limbs[0], ModelParams::from_fields(outputs.subspan(1))};
}

}  // namespace vfl::circuits
