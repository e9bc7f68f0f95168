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

#include <json.hpp>

#include "vfl/commitments.hpp"
#include "vfl/eddsa.hpp"
#include "vfl/fixed.hpp"

namespace vfl {

using Scores = std::array<Fixed, kNumClasses>;
using Features = std::array<Fixed, kNumFeatures>;

/// Single affine layer 9 -> 6. Local and global models share this shape.
struct ModelParams {
  std::array<std::array<Fixed, kNumFeatures>, kNumClasses> weights{};
  std::array<Fixed, kNumClasses> biases{};
  std::uint64_t version = 0;

  static constexpr std::size_t kNumParams = kNumClasses * kNumFeatures + kNumClasses;
  static constexpr std::size_t kNumFields = kNumParams + 1;

  /// Row-major weights, then biases (offset-encoded), then the version.
  std::vector<Fr> to_fields() const;
  /// Throws Error(kLengthMismatch) or Error(kRangeExceeded).
  static ModelParams from_fields(std::span<const Fr> fields);

  /// Flat JSON array: 54 raw weights, 6 raw biases, version.
  nlohmann::json to_json() const;
  static ModelParams from_json(const nlohmann::json& j);

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// A device-attested batch: records, the device's batch counter, the Merkle
/// commitment over the records, and the device signature over
/// batch_message(commitment.root, counter).
struct LearningBatch {
  std::vector<DataRecord> records;
  std::uint64_t counter = 0;
  MerkleCommitment commitment;
  Signature signature;
};

/// Poseidon(root, counter): the message a device signs for a batch.
Fr batch_message(const Fr& root, std::uint64_t counter);

/// scores = W * x + b, every product truncated by fixed_mul.
Scores forward(const ModelParams& model, const Features& x);

/// Index of the maximum score; ties go to the lowest index.
std::size_t predict(const Scores& scores);

/// floor(sum_c fixed_mul(e_c, e_c) / 6) with e = scores - onehot(label).
Fixed mse_loss(const Scores& scores, std::uint32_t label);

/// One full-batch gradient step on the mean squared error:
///   g_W = sum_r fixed_mul(e_r, x_r), g_b = sum_r e_r,
///   step = floor(g / (3n)),            (the 2 / (6n) mean-MSE factor)
///   new = old - fixed_mul(lr, step),   version + 1.
/// Range is checked at every materialised value; throws Error(kOverflow)
/// or Error(kEmptyBatch).
ModelParams local_learn(const ModelParams& global, std::span<const DataRecord> records, Fixed lr);

inline constexpr double kDefaultLearningRate = 0.1;

}  // namespace vfl
