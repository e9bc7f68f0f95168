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

#include "vfl/commitments.hpp"

#include "vfl/error.hpp"
#include "vfl/poseidon.hpp"

namespace vfl {

std::array<Fr, kRecordFields> DataRecord::to_fields() const {
  if (label >= kNumClasses) throw Error(ErrorCode::kRangeExceeded, "label must be below 6");
  std::array<Fr, kRecordFields> out;
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (!Fixed::in_range(features[i].raw)) throw Error(ErrorCode::kRangeExceeded, "feature out of range");
    out[i] = to_field(features[i]);
  }
  out[kNumFeatures] = Fr::from_u64(label);
  return out;
}

Fr leaf_hash(const DataRecord& record) {
  const auto fields = record.to_fields();
  return poseidon_hash(fields);
}

std::size_t merkle_depth(std::size_t leaf_count) {
  std::size_t depth = 1;
  while ((std::size_t{1} << depth) < leaf_count) ++depth;
  return depth;
}

MerkleCommitment merkle_root(std::span<const Fr> leaves) {
  if (leaves.empty()) throw Error(ErrorCode::kEmptyBatch, "merkle_root over no leaves");
  const std::size_t depth = merkle_depth(leaves.size());
  std::vector<Fr> level(std::size_t{1} << depth, Fr::zero());
  std::copy(leaves.begin(), leaves.end(), level.begin());
  while (level.size() > 1) {
    std::vector<Fr> next(level.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = poseidon_hash({level[2 * i], level[2 * i + 1]});
    level = std::move(next);
  }
  return MerkleCommitment{level[0], depth, leaves.size()};
}

MerkleCommitment commit_records(std::span<const DataRecord> records) {
  std::vector<Fr> leaves;
  leaves.reserve(records.size());
  for (const auto& r : records) leaves.push_back(leaf_hash(r));
  return merkle_root(leaves);
}

Fr public_key_digest(const babyjubjub::CurvePoint& pk) {
  if (!babyjubjub::on_curve(pk)) throw Error(ErrorCode::kOffCurveInput, "device public key");
  return poseidon_hash({pk.x, pk.y});
}

DeviceHandle device_handle(const babyjubjub::CurvePoint& pk, const Fr& salt) {
  if (!babyjubjub::on_curve(pk)) throw Error(ErrorCode::kOffCurveInput, "device public key");
  return DeviceHandle{poseidon_hash({pk.x, pk.y, salt})};
}

}  // namespace vfl
