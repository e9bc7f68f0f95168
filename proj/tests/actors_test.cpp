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

#include <functional>
#include <random>

#include "test_util.hpp"
#include "vfl/actors.hpp"

namespace vfl::actors {
namespace {

// Reference backend that runs a hook before every proof.
class HookedBackend final : public proof::ProofBackend {
 public:
  std::function<void()> before_prove;

  std::string_view name() const override { return inner_.name(); }
  proof::KeyPair setup(std::shared_ptr<const r1cs::ConstraintSystem> cs) override { return inner_.setup(cs); }
  proof::Proof prove(const proof::ProvingKey& pk, const r1cs::ConstraintSystem& cs, std::span<const Fr> pub,
                     std::span<const Fr> priv) const override {
    if (before_prove) before_prove();
    return inner_.prove(pk, cs, pub, priv);
  }
  bool verify(const proof::VerificationKey& vk, const proof::Proof& p,
              std::span<const Fr> pub) const noexcept override {
    return inner_.verify(vk, p, pub);
  }
  std::size_t verification_cost(const proof::VerificationKey& vk) const noexcept override {
    return inner_.verification_cost(vk);
  }

 private:
  proof::ReferenceBackend inner_;
};

std::shared_ptr<const std::vector<DataRecord>> records(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return std::make_shared<const std::vector<DataRecord>>(testing::random_records(rng, n));
}

TEST(CertificateAuthority, IssuesVerifiableCertificates) {
  std::mt19937_64 rng(91);
  CertificateAuthority ca(vfl::KeyPair::generate(rng));
  const vfl::KeyPair dk = vfl::KeyPair::generate(rng);
  const Signature cert = ca.issue(dk.public_key);
  EXPECT_TRUE(eddsa_verify(ca.root_public_key(), public_key_digest(dk.public_key), cert));
  EXPECT_EQ(ca.issued().size(), 1U);
  CurvePoint off = dk.public_key;
  off.y += Fr::one();
  EXPECT_THROW(ca.issue(off), Error);
  EXPECT_EQ(ca.issued().size(), 1U);
}

TEST(DataSource, FiniteAndCyclic) {
  const auto data = records(3, 1);
  DataSource finite(data, false, 1);
  EXPECT_EQ(finite.remaining(), 2U);
  EXPECT_EQ(finite.next(), (*data)[1]);
  EXPECT_EQ(finite.next(), (*data)[2]);
  try {
    finite.next();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSourceExhausted);
  }
  DataSource cyclic(data, true, 2);
  EXPECT_EQ(cyclic.next(), (*data)[2]);
  EXPECT_EQ(cyclic.next(), (*data)[0]);
}

TEST(Device, CountersAndBatches) {
  std::mt19937_64 rng(92);
  const vfl::KeyPair keys = vfl::KeyPair::generate(rng);
  Device dev(keys, Signature{}, DataSource(records(5, 2), false));
  EXPECT_EQ(dev.counter(), 0U);
  const LearningBatch b = dev.emit_batch(2);
  EXPECT_EQ(b.counter, 1U);
  EXPECT_EQ(b.commitment, commit_records(b.records));
  EXPECT_TRUE(eddsa_verify(keys.public_key, batch_message(b.commitment.root, 1), b.signature));
  EXPECT_EQ(dev.emit_batch(2).counter, 2U);
  EXPECT_THROW(dev.emit_batch(2), Error);
  EXPECT_EQ(dev.counter(), 2U);
  EXPECT_THROW(dev.emit_batch(0), Error);
  EXPECT_EQ(dev.emit_batch(1).counter, 3U);
}

class WorkerTest : public ::testing::Test {
 protected:
  static constexpr std::size_t kBatch = 2;

  WorkerTest()
      : backend_(std::make_shared<HookedBackend>()),
        ledger_(backend_, ModelParams{}, 2),
        rng_(93),
        ca_(vfl::KeyPair::generate(rng_)),
        worker_("w0", backend_, ledger_, 5) {
    const auto reg = std::make_shared<const r1cs::ConstraintSystem>(circuits::build_registration_circuit());
    const auto learn = std::make_shared<const r1cs::ConstraintSystem>(circuits::build_learning_circuit(kBatch));
    const proof::KeyPair rk = backend_->setup(reg);
    const proof::KeyPair lk = backend_->setup(learn);
    worker_.add_artifacts({reg, rk.proving});
    worker_.add_artifacts({learn, lk.proving});
    ledger_.submit({"ca", ledger::AnchorRootKey{{ca_.root_public_key()}}});
    ledger_.submit({"init", ledger::RegisterVk{rk.verification}});
    ledger_.submit({"init", ledger::RegisterVk{lk.verification}});
  }

  std::size_t add_device(bool certified = true, std::uint64_t seed = 0) {
    const vfl::KeyPair keys = vfl::KeyPair::generate(rng_);
    const Signature cert = certified ? ca_.issue(keys.public_key) : Signature{keys.public_key, U256(1)};
    return worker_.add_device(Device(keys, cert, DataSource(records(20, seed + 10), true)));
  }

  std::shared_ptr<HookedBackend> backend_;
  ledger::Ledger ledger_;
  std::mt19937_64 rng_;
  CertificateAuthority ca_;
  Worker worker_;
};

TEST_F(WorkerTest, RegistersDevicesOnce) {
  const std::size_t d = add_device();
  const ledger::Receipt r = worker_.register_device(d);
  EXPECT_TRUE(r.accepted);
  EXPECT_TRUE(ledger_.get_handle(worker_.handle(d)).has_value());
  EXPECT_EQ(worker_.salt(d), worker_.salt(d));
  EXPECT_EQ(worker_.register_device(d).reason, ledger::Rejection::kDuplicateHandle);
}

TEST_F(WorkerTest, UncertifiedDeviceCannotProve) {
  const std::size_t d = add_device(false);
  EXPECT_THROW(worker_.register_device(d), UnsatisfiableInputs);
}

TEST_F(WorkerTest, SaltsDifferPerDevice) {
  const std::size_t a = add_device(true, 1);
  const std::size_t b = add_device(true, 2);
  EXPECT_NE(worker_.salt(a), worker_.salt(b));
  EXPECT_NE(worker_.handle(a), worker_.handle(b));
}

TEST_F(WorkerTest, TransactionFieldsOutsideTheProofCarryNoSecrets) {
  const std::size_t d = add_device();
  ledger::Transaction tx = worker_.prepare_registration(d, ca_.root_public_key());
  // The reference backend is not zero-knowledge; its payload is the witness.
  std::get<ledger::RegisterDevice>(tx.payload).proof.payload.clear();
  const auto bytes = tx.serialize();
  auto contains = [&](const Fr& secret) {
    const auto needle = secret.to_bytes_be();
    return std::search(bytes.begin(), bytes.end(), needle.begin(), needle.end()) != bytes.end();
  };
  EXPECT_FALSE(contains(worker_.salt(d)));
  EXPECT_FALSE(contains(worker_.device(d).public_key().x));
}

TEST_F(WorkerTest, LearningRoundAdvancesCounterAndModel) {
  const std::size_t d = add_device();
  ASSERT_TRUE(worker_.register_device(d).accepted);
  const UpdateOutcome first = worker_.learning_round(d, kBatch);
  EXPECT_TRUE(first.receipt.accepted);
  EXPECT_EQ(first.counter, 1U);
  EXPECT_FALSE(first.retried);
  EXPECT_GT(first.prove_seconds, 0.0);
  EXPECT_EQ(ledger_.get_handle(worker_.handle(d))->last_counter, 1U);
  ledger_.submit({"clock", ledger::AdvanceBlock{}});
  ledger_.submit({"clock", ledger::AdvanceBlock{}});
  EXPECT_EQ(ledger_.get_latest_model().version, 1U);
  EXPECT_TRUE(worker_.learning_round(d, kBatch).receipt.accepted);
}

TEST_F(WorkerTest, MissingArtifactsIsKeyMismatch) {
  const std::size_t d = add_device();
  ASSERT_TRUE(worker_.register_device(d).accepted);
  try {
    worker_.learning_round(d, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKeyMismatch);
  }
}

TEST_F(WorkerTest, StaleModelIsRetriedOnce) {
  const std::size_t a = add_device(true, 1);
  const std::size_t b = add_device(true, 2);
  ASSERT_TRUE(worker_.register_device(a).accepted);
  ASSERT_TRUE(worker_.register_device(b).accepted);
  ASSERT_TRUE(worker_.learning_round(a, kBatch).receipt.accepted);

  // Close the cycle while device b is proving against the old model.
  bool fired = false;
  backend_->before_prove = [&] {
    if (fired) return;
    fired = true;
    ledger_.submit({"clock", ledger::AdvanceBlock{}});
    ledger_.submit({"clock", ledger::AdvanceBlock{}});
  };
  const UpdateOutcome out = worker_.learning_round(b, kBatch);
  EXPECT_TRUE(fired);
  EXPECT_TRUE(out.retried);
  EXPECT_TRUE(out.receipt.accepted);
  backend_->before_prove = nullptr;

  // Without a retry the stale proof is rejected.
  const ModelParams old = ledger_.get_latest_model();
  const LearningBatch batch = worker_.device(a).emit_batch(kBatch);
  const ledger::Transaction stale = worker_.prepare_update(a, batch, old);
  ledger_.submit({"clock", ledger::AdvanceBlock{}});
  ledger_.submit({"clock", ledger::AdvanceBlock{}});
  ASSERT_NE(ledger_.get_latest_model(), old);
  EXPECT_EQ(ledger_.submit(stale).reason, ledger::Rejection::kStaleGlobalModel);
}

TEST_F(WorkerTest, FabricatedRecordsCannotBeProven) {
  const std::size_t d = add_device();
  ASSERT_TRUE(worker_.register_device(d).accepted);
  LearningBatch batch = worker_.device(d).emit_batch(kBatch);
  batch.records[1].label = (batch.records[1].label + 1) % kNumClasses;
  EXPECT_THROW(worker_.prepare_update(d, batch, ledger_.get_latest_model()), UnsatisfiableInputs);
  batch = worker_.device(d).emit_batch(kBatch);
  batch.counter = 1;
  EXPECT_THROW(worker_.prepare_update(d, batch, ledger_.get_latest_model()), UnsatisfiableInputs);
}

TEST_F(WorkerTest, ForeignDeviceBatchCannotBeProvenUnderOwnHandle) {
  const std::size_t a = add_device(true, 1);
  const std::size_t b = add_device(true, 2);
  const LearningBatch batch = worker_.device(b).emit_batch(kBatch);
  EXPECT_THROW(worker_.prepare_update(a, batch, ledger_.get_latest_model()), UnsatisfiableInputs);
}

}  // namespace
}  // namespace vfl::actors
