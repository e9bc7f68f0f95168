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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vfl/commitments.hpp"
#include "vfl/eddsa.hpp"
#include "vfl/learner.hpp"
#include "vfl/r1cs.hpp"

namespace vfl::circuits {

using r1cs::ConstraintSystem;

inline constexpr std::string_view kRegistrationLabel = "registration";

/// "learning/b<batch_size>"
std::string learning_label(std::size_t batch_size);

/// Public input: root key (x, y). Private inputs: device key (x, y),
/// certificate (R.x, R.y, S), salt. Public output: device handle.
ConstraintSystem build_registration_circuit();

struct RegistrationWitnessInputs {
  CurvePoint device_key;
  Signature certificate;
  Fr salt;
};

std::vector<Fr> registration_public_inputs(const CurvePoint& root_key);
std::vector<Fr> registration_private_inputs(const RegistrationWitnessInputs& in);

/// Public inputs: device handle, global model (61 fields). Private inputs:
/// records (10 fields each), batch signature (R.x, R.y, S), device key
/// (x, y), salt, batch counter. Public outputs: counter, local model.
/// The learning rate is a circuit constant. Throws Error(kEmptyBatch).
ConstraintSystem build_learning_circuit(std::size_t batch_size,
                                        Fixed learning_rate = encode_fixed(kDefaultLearningRate));

struct LearningWitnessInputs {
  const LearningBatch* batch = nullptr;
  CurvePoint device_key;
  Fr salt;
};

std::vector<Fr> learning_public_inputs(const DeviceHandle& handle, const ModelParams& global);
/// Throws Error(kRangeExceeded) for labels or features outside the encoding.
std::vector<Fr> learning_private_inputs(const LearningWitnessInputs& in);

struct LearningOutputs {
  std::uint64_t counter = 0;
  ModelParams local_model;
};

std::vector<Fr> learning_public_outputs(const LearningOutputs& out);
/// Throws Error(kLengthMismatch) or Error(kRangeExceeded).
LearningOutputs decode_learning_outputs(std::span<const Fr> outputs);

}  // namespace vfl::circuits
