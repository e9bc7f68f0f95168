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
#include "vfl/circuit_builder.hpp"
#include "vfl/circuits.hpp"
#include "vfl/gadgets.hpp"
#include "vfl/poseidon.hpp"

namespace vfl {
namespace {

using r1cs::CircuitBuilder;
using r1cs::ConstraintSystem;
using r1cs::Lc;
using r1cs::Var;

// One-output circuit over `n` private inputs; returns the solved output.
Fr run_gadget(std::size_t n, const std::function<Lc(CircuitBuilder&, std::span<const Var>)>& body,
              std::span<const Fr> inputs) {
  CircuitBuilder b("gadget");
  const Var out = b.public_output();
  std::vector<Var> in(n);
  for (Var& v : in) v = b.private_input();
  b.bind_output(out, body(b, in));
  const ConstraintSystem cs = std::move(b).finalize();
  const r1cs::Witness w = r1cs::synthesize_witness(cs, {}, inputs);
  EXPECT_TRUE(r1cs::check_satisfaction(cs, w));
  return r1cs::public_outputs(cs, w).at(0);
}

std::vector<Var> bits_of(CircuitBuilder& b, Var v, unsigned n) { return b.to_bits(v, n); }

TEST(Builder, PhaseOrderIsEnforced) {
  CircuitBuilder b("x");
  b.private_input();
  EXPECT_THROW(b.public_input(), std::logic_error);
}

TEST(Builder, ConstantFolding) {
  CircuitBuilder b("x");
  const Var v = b.private_input();
  const Lc c = b.mul(Lc::constant(3), Lc(v));
  EXPECT_EQ(b.num_constraints(), 0U);
  EXPECT_FALSE(c.is_constant());
  const Lc k = b.mul(Lc::constant(3), Lc::constant(4));
  EXPECT_TRUE(k.is_constant());
  EXPECT_EQ(k.constant_value(), Fr::from_u64(12));
  b.div(Lc(v), Lc::constant(5));
  EXPECT_EQ(b.num_constraints(), 0U);
  b.mul(Lc(v), Lc(v));
  EXPECT_EQ(b.num_constraints(), 1U);
}

TEST(Builder, LcCompactMergesTerms) {
  Lc lc = Lc(3) + Lc(3) - Lc(5) + Lc(5);
  lc.compact();
  ASSERT_EQ(lc.terms().size(), 1U);
  EXPECT_EQ(lc.terms()[0].coeff, Fr::from_u64(2));
}

TEST(Builder, RangeCheckAndBits) {
  auto check = [](std::uint64_t value, unsigned n) {
    CircuitBuilder b("range");
    const Var v = b.private_input();
    b.range_check(v, n);
    const ConstraintSystem cs = std::move(b).finalize();
    try {
      r1cs::synthesize_witness(cs, {}, std::vector<Fr>{Fr::from_u64(value)});
      return true;
    } catch (const UnsatisfiableInputs&) {
      return false;
    }
  };
  EXPECT_TRUE(check(255, 8));
  EXPECT_FALSE(check(256, 8));
  EXPECT_TRUE(check(0, 1));
}

TEST(Builder, BitsLessOrEqual) {
  const U256 bound(1000);
  for (std::uint64_t v : {0ULL, 999ULL, 1000ULL, 1001ULL, 1023ULL}) {
    CircuitBuilder b("le");
    const Var x = b.private_input();
    const auto bits = b.to_bits(x, 10);
    b.enforce_bits_le(bits, bound);
    const ConstraintSystem cs = std::move(b).finalize();
    const bool ok = [&] {
      try {
        r1cs::synthesize_witness(cs, {}, std::vector<Fr>{Fr::from_u64(v)});
        return true;
      } catch (const UnsatisfiableInputs&) {
        return false;
      }
    }();
    EXPECT_EQ(ok, v <= 1000) << v;
  }
}

TEST(Builder, IndicatorAndDivMod) {
  for (std::int64_t v : {-7, -6, 0, 5, 6, 13}) {
    const Fr in = Fr::from_i64(v);
    EXPECT_EQ(run_gadget(1, [](CircuitBuilder& b, auto x) { return Lc(b.indicator(x[0], 6)); }, std::span(&in, 1)),
              Fr::from_u64(v == 6 ? 1 : 0));
    EXPECT_EQ(run_gadget(1, [](CircuitBuilder& b, auto x) { return Lc(b.div_mod(x[0], 4).first); }, std::span(&in, 1)),
              Fr::from_i64(floor_div(v, 4)));
    EXPECT_EQ(run_gadget(1, [](CircuitBuilder& b, auto x) { return Lc(b.div_mod(x[0], 4).second); }, std::span(&in, 1)),
              Fr::from_i64(v - 4 * floor_div(v, 4)));
  }
}

TEST(Gadgets, PoseidonMatchesNative) {
  std::mt19937_64 rng(41);
  for (std::size_t n : {1U, 2U, 3U, 5U, 10U}) {
    std::vector<Fr> in;
    for (std::size_t i = 0; i < n; ++i) in.push_back(testing::random_fr(rng));
    const Fr got = run_gadget(
        n,
        [](CircuitBuilder& b, std::span<const Var> x) {
          std::vector<Lc> lcs(x.begin(), x.end());
          return gadgets::poseidon(b, lcs);
        },
        in);
    EXPECT_EQ(got, poseidon_hash(in)) << n;
  }
}

TEST(Gadgets, PoseidonFoldsConstants) {
  CircuitBuilder b("c");
  const Lc h = gadgets::poseidon(b, {Lc::constant(1), Lc::constant(2)});
  EXPECT_EQ(b.num_constraints(), 0U);
  EXPECT_EQ(h.constant_value(), poseidon_hash({Fr::from_u64(1), Fr::from_u64(2)}));
}

TEST(Gadgets, ScalarMulMatchesNative) {
  std::mt19937_64 rng(42);
  const CurvePoint p = babyjubjub::scalar_mul(U256(rng()), babyjubjub::base_point());
  for (int i = 0; i < 3; ++i) {
    const std::uint64_t k = rng() >> 4;
    const CurvePoint want = babyjubjub::scalar_mul(U256(k), p);
    for (int coord = 0; coord < 2; ++coord) {
      const std::vector<Fr> in{Fr::from_u64(k), p.x, p.y};
      const Fr got = run_gadget(
          3,
          [coord](CircuitBuilder& b, std::span<const Var> x) {
            const auto bits = bits_of(b, x[0], 60);
            const gadgets::PointVar r = gadgets::scalar_mul(b, bits, gadgets::PointVar{x[1], x[2]});
            return coord == 0 ? r.x : r.y;
          },
          in);
      EXPECT_EQ(got, coord == 0 ? want.x : want.y);
    }
    const std::vector<Fr> in{Fr::from_u64(k)};
    const Fr fixed = run_gadget(
        1,
        [&p](CircuitBuilder& b, std::span<const Var> x) {
          return gadgets::fixed_base_mul(b, bits_of(b, x[0], 60), p).x;
        },
        in);
    EXPECT_EQ(fixed, want.x);
  }
}

TEST(Gadgets, PointAddMatchesNativeIncludingIdentityAndDoubling) {
  const CurvePoint g = babyjubjub::base_point();
  const CurvePoint h = babyjubjub::scalar_mul(U256(12345), g);
  const std::vector<std::pair<CurvePoint, CurvePoint>> cases{
      {g, h}, {g, g}, {g, CurvePoint::identity()}, {g, babyjubjub::negate(g)}};
  for (const auto& [p, q] : cases) {
    const std::vector<Fr> in{p.x, p.y, q.x, q.y};
    const Fr got = run_gadget(
        4,
        [](CircuitBuilder& b, std::span<const Var> x) {
          const auto r = gadgets::point_add(b, {x[0], x[1]}, {x[2], x[3]});
          return r.x + r.y * Fr::from_u64(3);
        },
        in);
    const CurvePoint want = babyjubjub::add(p, q);
    EXPECT_EQ(got, want.x + want.y * Fr::from_u64(3));
  }
}

TEST(Gadgets, EddsaVerifyAcceptsValidRejectsInvalid) {
  std::mt19937_64 rng(43);
  const KeyPair keys = KeyPair::generate(rng);
  const Fr msg = testing::random_fr(rng);
  const Signature sig = eddsa_sign(keys.secret, msg);
  auto run = [](const CurvePoint& pk, const Fr& m, const Signature& s) {
    CircuitBuilder b("eddsa");
    std::vector<Var> x(6);
    for (Var& v : x) v = b.private_input();
    gadgets::eddsa_verify(b, {x[0], x[1]}, x[2], {x[3], x[4]}, x[5]);
    const ConstraintSystem cs = std::move(b).finalize();
    try {
      r1cs::synthesize_witness(cs, {}, std::vector<Fr>{pk.x, pk.y, m, s.r.x, s.r.y, Fr::from_u256(s.s)});
      return true;
    } catch (const UnsatisfiableInputs&) {
      return false;
    }
  };
  EXPECT_TRUE(run(keys.public_key, msg, sig));
  EXPECT_FALSE(run(keys.public_key, msg + Fr::one(), sig));
  Signature bad = sig;
  bad.s = bad.s + U256(1);
  EXPECT_FALSE(run(keys.public_key, msg, bad));
  // S + l verifies natively only modulo l; the circuit requires S < l.
  Signature wrapped = sig;
  wrapped.s = sig.s + babyjubjub::kSubgroupOrder;
  EXPECT_FALSE(run(keys.public_key, msg, wrapped));
  EXPECT_FALSE(run(KeyPair::generate(rng).public_key, msg, sig));
  CurvePoint off = keys.public_key;
  off.x += Fr::one();
  EXPECT_FALSE(run(off, msg, sig));
}

TEST(Gadgets, MerkleRootMatchesNative) {
  std::mt19937_64 rng(44);
  for (std::size_t n : {1U, 2U, 3U, 7U, 10U}) {
    std::vector<Fr> leaves;
    for (std::size_t i = 0; i < n; ++i) leaves.push_back(testing::random_fr(rng));
    const Fr got = run_gadget(
        n,
        [n](CircuitBuilder& b, std::span<const Var> x) {
          std::vector<Lc> lcs(x.begin(), x.end());
          return gadgets::merkle_root(b, lcs, merkle_depth(n));
        },
        leaves);
    EXPECT_EQ(got, merkle_root(leaves).root) << n;
  }
}

TEST(Gadgets, FixedArithmeticMatchesNative) {
  std::mt19937_64 rng(45);
  for (int i = 0; i < 20; ++i) {
    const Fixed a{static_cast<std::int64_t>(rng() % (1U << 24)) - (1 << 23)};
    const Fixed c{static_cast<std::int64_t>(rng() % (1U << 24)) - (1 << 23)};
    const std::vector<Fr> in{Fr::from_i64(a.raw), Fr::from_i64(c.raw)};
    EXPECT_EQ(run_gadget(2, [](CircuitBuilder& b, auto x) { return gadgets::fixed_mul(b, x[0], x[1]); }, in),
              Fr::from_i64(fixed_mul(a, c).raw));
    EXPECT_EQ(run_gadget(2, [](CircuitBuilder& b, auto x) { return gadgets::floor_div(b, x[0], 30); }, in),
              Fr::from_i64(floor_div(a.raw, 30)));
  }
  const std::vector<Fr> big{Fr::from_i64(kRawBound), Fr::one()};
  EXPECT_THROW(run_gadget(2, [](CircuitBuilder& b, auto x) { gadgets::range_check_fixed(b, x[0]); return Lc(x[1]); }, big),
               UnsatisfiableInputs);
  const std::vector<Fr> low{Fr::from_i64(-kRawBound), Fr::one()};
  EXPECT_EQ(run_gadget(2, [](CircuitBuilder& b, auto x) { gadgets::range_check_fixed(b, x[0]); return Lc(x[1]); }, low),
            Fr::one());
}

TEST(Gadgets, LocalLearnMatchesNative) {
  std::mt19937_64 rng(46);
  for (std::size_t n : {1U, 4U}) {
    const ModelParams gm = testing::random_model(rng);
    const auto records = testing::random_records(rng, n);
    const ModelParams want = local_learn(gm, records, encode_fixed(0.1));

    CircuitBuilder b("learn");
    std::vector<Var> out(ModelParams::kNumParams);
    for (Var& v : out) v = b.public_output();
    gadgets::ModelVars g;
    for (auto& row : g.weights) {
      for (Lc& w : row) w = b.private_input();
    }
    for (Lc& bias : g.biases) bias = b.private_input();
    std::vector<gadgets::RecordVars> rv(n);
    for (auto& r : rv) {
      for (Lc& f : r.features) f = b.private_input();
      r.label = b.private_input();
    }
    const gadgets::ModelVars lm = gadgets::local_learn(b, g, rv, encode_fixed(0.1));
    std::size_t k = 0;
    for (const auto& row : lm.weights) {
      for (const Lc& w : row) b.bind_output(out[k++], w);
    }
    for (const Lc& bias : lm.biases) b.bind_output(out[k++], bias);
    const ConstraintSystem cs = std::move(b).finalize();

    std::vector<Fr> priv;
    for (const auto& row : gm.weights) {
      for (Fixed w : row) priv.push_back(Fr::from_i64(w.raw));
    }
    for (Fixed bias : gm.biases) priv.push_back(Fr::from_i64(bias.raw));
    for (const auto& r : records) {
      for (Fixed f : r.features) priv.push_back(Fr::from_i64(f.raw));
      priv.push_back(Fr::from_u64(r.label));
    }
    const auto outs = r1cs::public_outputs(cs, r1cs::synthesize_witness(cs, {}, priv));
    k = 0;
    for (const auto& row : want.weights) {
      for (Fixed w : row) EXPECT_EQ(outs[k++], Fr::from_i64(w.raw));
    }
    for (Fixed bias : want.biases) EXPECT_EQ(outs[k++], Fr::from_i64(bias.raw));

    // A label outside [0, 6) has no indicator assignment.
    priv.back() = Fr::from_u64(6);
    EXPECT_THROW(r1cs::synthesize_witness(cs, {}, priv), UnsatisfiableInputs);
  }
}

class RegistrationCircuit : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { cs_ = new ConstraintSystem(circuits::build_registration_circuit()); }
  static void TearDownTestSuite() { delete cs_; }

  RegistrationCircuit() : rng_(51), root_(KeyPair::generate(rng_)), device_(KeyPair::generate(rng_)) {
    in_.device_key = device_.public_key;
    in_.certificate = eddsa_sign(root_.secret, public_key_digest(device_.public_key));
    in_.salt = testing::random_fr(rng_);
  }

  bool satisfiable(const CurvePoint& root, const circuits::RegistrationWitnessInputs& in) {
    try {
      r1cs::synthesize_witness(*cs_, circuits::registration_public_inputs(root),
                               circuits::registration_private_inputs(in));
      return true;
    } catch (const UnsatisfiableInputs&) {
      return false;
    }
  }

  static ConstraintSystem* cs_;
  std::mt19937_64 rng_;
  KeyPair root_, device_;
  circuits::RegistrationWitnessInputs in_;
};

ConstraintSystem* RegistrationCircuit::cs_ = nullptr;

TEST_F(RegistrationCircuit, Layout) {
  EXPECT_EQ(cs_->label, "registration");
  EXPECT_EQ(cs_->num_public_inputs, 2U);
  EXPECT_EQ(cs_->num_public_outputs, 1U);
  EXPECT_EQ(cs_->num_private_inputs, 6U);
}

TEST_F(RegistrationCircuit, OutputsDeviceHandle) {
  const auto w = r1cs::synthesize_witness(*cs_, circuits::registration_public_inputs(root_.public_key),
                                          circuits::registration_private_inputs(in_));
  EXPECT_TRUE(r1cs::check_satisfaction(*cs_, w));
  EXPECT_EQ(r1cs::public_outputs(*cs_, w), std::vector<Fr>{device_handle(device_.public_key, in_.salt).value});
}

TEST_F(RegistrationCircuit, RejectsBadCertificates) {
  EXPECT_FALSE(satisfiable(KeyPair::generate(rng_).public_key, in_));
  auto other = in_;
  other.device_key = KeyPair::generate(rng_).public_key;
  EXPECT_FALSE(satisfiable(root_.public_key, other));
  other = in_;
  other.certificate = eddsa_sign(KeyPair::generate(rng_).secret, public_key_digest(device_.public_key));
  EXPECT_FALSE(satisfiable(root_.public_key, other));
  other = in_;
  other.certificate.s = other.certificate.s + U256(1);
  EXPECT_FALSE(satisfiable(root_.public_key, other));
}

TEST_F(RegistrationCircuit, ForgedHandleViolatesConstraints) {
  auto w = r1cs::synthesize_witness(*cs_, circuits::registration_public_inputs(root_.public_key),
                                    circuits::registration_private_inputs(in_));
  w.assignment[cs_->first_public_output()] += Fr::one();
  EXPECT_FALSE(r1cs::check_satisfaction(*cs_, w));
}

class LearningCircuit : public ::testing::Test {
 protected:
  static constexpr std::size_t kBatch = 3;
  static void SetUpTestSuite() { cs_ = new ConstraintSystem(circuits::build_learning_circuit(kBatch)); }
  static void TearDownTestSuite() { delete cs_; }

  LearningCircuit() : rng_(61), device_(KeyPair::generate(rng_)) {
    salt_ = testing::random_fr(rng_);
    gm_ = testing::random_model(rng_);
    batch_ = testing::signed_batch(device_, testing::random_records(rng_, kBatch), 4);
    handle_ = device_handle(device_.public_key, salt_);
  }

  std::vector<Fr> pub() const { return circuits::learning_public_inputs(handle_, gm_); }
  std::vector<Fr> priv() const {
    return circuits::learning_private_inputs({&batch_, device_.public_key, salt_});
  }
  bool satisfiable(std::span<const Fr> pub, std::span<const Fr> priv) const {
    try {
      r1cs::synthesize_witness(*cs_, pub, priv);
      return true;
    } catch (const UnsatisfiableInputs&) {
      return false;
    }
  }

  static ConstraintSystem* cs_;
  std::mt19937_64 rng_;
  KeyPair device_;
  Fr salt_;
  ModelParams gm_;
  LearningBatch batch_;
  DeviceHandle handle_;
};

ConstraintSystem* LearningCircuit::cs_ = nullptr;

TEST_F(LearningCircuit, OutputsMatchNativeLearner) {
  const auto w = r1cs::synthesize_witness(*cs_, pub(), priv());
  EXPECT_TRUE(r1cs::check_satisfaction(*cs_, w));
  const auto out = circuits::decode_learning_outputs(r1cs::public_outputs(*cs_, w));
  EXPECT_EQ(out.counter, 4U);
  EXPECT_EQ(out.local_model, local_learn(gm_, batch_.records, encode_fixed(kDefaultLearningRate)));
  EXPECT_EQ(out.local_model.version, gm_.version + 1);
}

TEST_F(LearningCircuit, Layout) {
  EXPECT_EQ(cs_->label, "learning/b3");
  EXPECT_EQ(cs_->num_public_inputs, 1 + ModelParams::kNumFields);
  EXPECT_EQ(cs_->num_public_outputs, 1 + ModelParams::kNumFields);
  EXPECT_EQ(cs_->num_private_inputs, kBatch * kRecordFields + 7);
}

TEST_F(LearningCircuit, RejectsTamperedPrivateInputs) {
  const std::vector<Fr> good = priv();
  auto mutated = [&](std::size_t i, const Fr& v) {
    auto p = good;
    p[i] = v;
    return p;
  };
  const std::size_t sig = kBatch * kRecordFields;
  EXPECT_FALSE(satisfiable(pub(), mutated(0, good[0] + Fr::one()))) << "feature";
  EXPECT_FALSE(satisfiable(pub(), mutated(kNumFeatures, Fr::from_u64((batch_.records[0].label + 1) % 6))))
      << "label";
  EXPECT_FALSE(satisfiable(pub(), mutated(sig + 6, good[sig + 6] + Fr::one()))) << "counter";
  EXPECT_FALSE(satisfiable(pub(), mutated(sig + 5, good[sig + 5] + Fr::one()))) << "salt";
  const CurvePoint other = KeyPair::generate(rng_).public_key;
  auto p = mutated(sig + 3, other.x);
  p[sig + 4] = other.y;
  EXPECT_FALSE(satisfiable(pub(), p)) << "device key";
  EXPECT_FALSE(satisfiable(pub(), mutated(sig + 2, good[sig + 2] + Fr::one()))) << "signature";
}

TEST_F(LearningCircuit, RejectsWrongHandleAndOutOfRangeModel) {
  auto p = pub();
  p[0] += Fr::one();
  EXPECT_FALSE(satisfiable(p, priv()));
  p = pub();
  p[1] = Fr::from_u64(std::uint64_t{1} << 32);
  EXPECT_FALSE(satisfiable(p, priv()));
}

TEST_F(LearningCircuit, ForgedLocalModelViolatesConstraints) {
  auto w = r1cs::synthesize_witness(*cs_, pub(), priv());
  for (std::size_t i = 0; i < 1 + ModelParams::kNumFields; ++i) {
    auto forged = w;
    forged.assignment[cs_->first_public_output() + i] += Fr::one();
    EXPECT_FALSE(r1cs::check_satisfaction(*cs_, forged)) << i;
  }
}

TEST_F(LearningCircuit, EveryVariableIsConstrained) {
  const auto w = r1cs::synthesize_witness(*cs_, pub(), priv());
  std::mt19937_64 rng(62);
  for (int i = 0; i < 100; ++i) {
    auto forged = w;
    const std::size_t pos = 1 + rng() % (cs_->num_variables() - 1);
    forged.assignment[pos] += Fr::one();
    EXPECT_FALSE(r1cs::check_satisfaction(*cs_, forged)) << pos;
  }
}

TEST_F(LearningCircuit, ArityAndLength) {
  auto p = priv();
  p.pop_back();
  try {
    r1cs::synthesize_witness(*cs_, pub(), p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArityMismatch);
  }
  r1cs::Witness w{std::vector<Fr>(3)};
  try {
    r1cs::check_satisfaction(*cs_, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(Circuits, DeterministicAndSerializable) {
  const ConstraintSystem a = circuits::build_learning_circuit(2);
  const ConstraintSystem b = circuits::build_learning_circuit(2);
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_NE(a.digest(), circuits::build_learning_circuit(2, encode_fixed(0.2)).digest());
  const auto bytes = a.serialize();
  const ConstraintSystem c = ConstraintSystem::deserialize(bytes);
  EXPECT_EQ(c.serialize(), bytes);
  EXPECT_EQ(c.digest(), a.digest());
  EXPECT_EQ(c.num_constraints(), a.num_constraints());
  std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + bytes.size() / 2);
  EXPECT_THROW(ConstraintSystem::deserialize(truncated), Error);
}

TEST(Circuits, EmptyCircuitIsTriviallySatisfied) {
  const ConstraintSystem cs = CircuitBuilder("empty").finalize();
  EXPECT_TRUE(r1cs::check_satisfaction(cs, r1cs::Witness{{Fr::one()}}));
}

TEST(Circuits, RegistrationIsSmallRelativeToLearning) {
  const auto reg = circuits::build_registration_circuit().num_constraints();
  const auto b1 = circuits::build_learning_circuit(1).num_constraints();
  const auto b2 = circuits::build_learning_circuit(2).num_constraints();
  EXPECT_LT(reg, b1);
  EXPECT_LT(b1, b2);
  EXPECT_THROW(circuits::build_learning_circuit(0), Error);
}

TEST(Circuits, DecodeOutputsErrors) {
  EXPECT_THROW(circuits::decode_learning_outputs(std::vector<Fr>(5)), Error);
  std::vector<Fr> out = circuits::learning_public_outputs({3, ModelParams{}});
  out[0] = -Fr::one();
  EXPECT_THROW(circuits::decode_learning_outputs(out), Error);
}

}  // namespace
}  // namespace vfl
