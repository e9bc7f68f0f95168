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

#include "vfl/babyjubjub.hpp"
#include "vfl/field.hpp"
#include "vfl/fixed.hpp"

namespace vfl {

inline constexpr std::size_t kNumFeatures = 9;
inline constexpr std::size_t kNumClasses = 6;
inline constexpr std::size_t kRecordFields = kNumFeatures + 1;

/// One labelled sample. Features in dataset column order, label last.
struct DataRecord {
  std::array<Fixed, kNumFeatures> features{};
  std::uint32_t label = 0;

  /// Offset-encoded features followed by the label. Throws
  /// Error(kRangeExceeded) for a label >= 6.
  std::array<Fr, kRecordFields> to_fields() const;

  friend bool operator==(const DataRecord&, const DataRecord&) = default;
};

struct MerkleCommitment {
  Fr root;
  std::size_t depth = 0;
  std::size_t leaf_count = 0;

  friend bool operator==(const MerkleCommitment&, const MerkleCommitment&) = default;
};

/// Salted commitment to a device public key; the only device identifier the
/// ledger ever sees.
struct DeviceHandle {
  Fr value;

  friend bool operator==(const DeviceHandle&, const DeviceHandle&) = default;
  friend auto operator<=>(const DeviceHandle& a, const DeviceHandle& b) { return a.value <=> b.value; }
};

/// Left-fold Poseidon chain over the ten record fields.
Fr leaf_hash(const DataRecord& record);

/// Depth of the padded tree for `leaf_count` leaves: ceil(log2 n), at least 1.
std::size_t merkle_depth(std::size_t leaf_count);

/// Binary Poseidon tree over the leaves, zero-padded to 2^depth.
/// Throws Error(kEmptyBatch) for no leaves.
MerkleCommitment merkle_root(std::span<const Fr> leaves);

/// Root over leaf_hash of each record.
MerkleCommitment commit_records(std::span<const DataRecord> records);

/// Poseidon(pk.x, pk.y); the message a CA signs when certifying a device.
Fr public_key_digest(const babyjubjub::CurvePoint& pk);

/// Poseidon(pk.x, pk.y, salt). Throws Error(kOffCurveInput).
DeviceHandle device_handle(const babyjubjub::CurvePoint& pk, const Fr& salt);

}  // namespace vfl
