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

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "vfl/commitments.hpp"
#include "vfl/error.hpp"
#include "vfl/poseidon.hpp"

namespace vfl {
namespace {

TEST(Merkle, Depth) {
  EXPECT_EQ(merkle_depth(1), 1U);
  EXPECT_EQ(merkle_depth(2), 1U);
  EXPECT_EQ(merkle_depth(3), 2U);
  EXPECT_EQ(merkle_depth(8), 3U);
  EXPECT_EQ(merkle_depth(10), 4U);
  EXPECT_EQ(merkle_depth(40), 6U);
}

TEST(Merkle, GoldenRoots) {
  for (const auto& c : testing::golden()["merkle"]) {
    std::vector<Fr> leaves;
    for (const auto& v : c["leaves"]) leaves.push_back(testing::fr(v));
    const MerkleCommitment m = merkle_root(leaves);
    EXPECT_EQ(m.root, testing::fr(c["root"])) << leaves.size();
    EXPECT_EQ(m.depth, c["depth"].get<std::size_t>());
    EXPECT_EQ(m.leaf_count, leaves.size());
  }
}

TEST(Merkle, SingleLeafPadsWithZero) {
  const Fr leaf = Fr::from_u64(5);
  EXPECT_EQ(merkle_root(std::vector<Fr>{leaf}).root, poseidon_hash({leaf, Fr::zero()}));
}

TEST(Merkle, EmptyBatch) {
  try {
    merkle_root(std::span<const Fr>());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyBatch);
  }
}

TEST(Merkle, SensitiveToEveryLeafAndOrder) {
  std::mt19937_64 rng(21);
  std::vector<Fr> leaves;
  for (int i = 0; i < 10; ++i) leaves.push_back(testing::random_fr(rng));
  const Fr root = merkle_root(leaves).root;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    auto mutated = leaves;
    mutated[i] += Fr::one();
    EXPECT_NE(merkle_root(mutated).root, root) << i;
  }
  auto swapped = leaves;
  std::swap(swapped[0], swapped[1]);
  EXPECT_NE(merkle_root(swapped).root, root);
}

TEST(Records, LeafHashesMatchOracle) {
  for (const auto& c : testing::golden()["local_learn"]) {
    const auto records = testing::records_from_raw(c["records"]);
    for (std::size_t i = 0; i < records.size(); ++i) {
      EXPECT_EQ(leaf_hash(records[i]), testing::fr(c["leaf_hashes"][i]));
    }
    EXPECT_EQ(commit_records(records).root, testing::fr(c["root"]));
  }
}

TEST(Records, FieldEncoding) {
  DataRecord r;
  r.features[0] = Fixed{-1};
  r.features[1] = Fixed{kFixedOne};
  r.label = 5;
  const auto f = r.to_fields();
  EXPECT_EQ(f[0], Fr::from_u64(kFieldOffset - 1));
  EXPECT_EQ(f[1], Fr::from_u64(kFieldOffset + kFixedOne));
  EXPECT_EQ(f[9], Fr::from_u64(5));
  r.label = 6;
  EXPECT_THROW(r.to_fields(), Error);
}

TEST(DeviceHandle, GoldenHandles) {
  for (const auto& c : testing::golden()["device_handle"]) {
    const babyjubjub::CurvePoint pk{testing::fr(c["public"][0]), testing::fr(c["public"][1])};
    EXPECT_EQ(public_key_digest(pk), testing::fr(c["digest"]));
    EXPECT_EQ(device_handle(pk, testing::fr(c["salt"])).value, testing::fr(c["handle"]));
  }
}

TEST(DeviceHandle, SaltHidesKey) {
  const auto& pk = babyjubjub::base_point();
  EXPECT_NE(device_handle(pk, Fr::from_u64(1)), device_handle(pk, Fr::from_u64(2)));
  EXPECT_THROW(device_handle(babyjubjub::CurvePoint{Fr::one(), Fr::one()}, Fr::one()), Error);
}

}  // namespace
}  // namespace vfl
