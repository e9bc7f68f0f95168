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

#include "vfl/gadgets.hpp"

#include <stdexcept>

#include "vfl/poseidon.hpp"

namespace vfl::gadgets {

namespace bj = babyjubjub;

namespace {

Lc sbox(CircuitBuilder& b, const Lc& x) {
  if (x.is_constant()) {
    const Fr v = x.constant_value();
    return Lc::constant(v.square().square() * v);
  }
  const Lc x2 = b.mul(x, x);
  const Lc x4 = b.mul(x2, x2);
  return b.mul(x4, x);
}

Lc bounded(CircuitBuilder& b, Lc lc) {
  lc.compact();
  if (lc.terms().size() > 8) return b.materialize(lc);
  return lc;
}

Lc permute(CircuitBuilder& b, const Lc& in0, const Lc& in1) {
  const PoseidonParams& params = poseidon_params();
  std::array<Lc, 3> state{Lc(), in0, in1};
  for (std::size_t r = 0; r < params.rounds(); ++r) {
    for (std::size_t i = 0; i < 3; ++i) state[i] = state[i] + params.round_constants[r * 3 + i];
    if (params.is_full_round(r)) {
      for (auto& s : state) s = sbox(b, s);
    } else {
      state[0] = sbox(b, state[0]);
    }
    std::array<Lc, 3> mixed;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) mixed[i] += state[j] * params.mds[i][j];
      mixed[i] = bounded(b, std::move(mixed[i]));
    }
    state = std::move(mixed);
  }
  return state[0];
}

Fr field_of(std::uint64_t v) { return Fr::from_u64(v); }

}  // namespace

Lc poseidon(CircuitBuilder& b, std::span<const Lc> inputs) {
  if (inputs.empty()) throw Error(ErrorCode::kEmptyInput, "poseidon gadget needs at least one input");
  Lc acc = permute(b, inputs[0], inputs.size() > 1 ? inputs[1] : Lc());
  for (std::size_t i = 2; i < inputs.size(); ++i) acc = permute(b, acc, inputs[i]);
  return acc;
}

Lc poseidon(CircuitBuilder& b, std::initializer_list<Lc> inputs) {
  return poseidon(b, std::span<const Lc>(inputs.begin(), inputs.size()));
}

void assert_on_curve(CircuitBuilder& b, const PointVar& p) {
  const Lc x2 = b.mul(p.x, p.x);
  const Lc y2 = b.mul(p.y, p.y);
  // a*x^2 + y^2 = 1 + d*x^2*y^2
  b.enforce(x2 * field_of(bj::kD), y2, x2 * field_of(bj::kA) + y2 - Fr::one());
}

void assert_equal(CircuitBuilder& b, const PointVar& p, const PointVar& q) {
  b.enforce_equal(p.x, q.x);
  b.enforce_equal(p.y, q.y);
}

PointVar point_add(CircuitBuilder& b, const PointVar& p, const PointVar& q) {
  const Fr a = field_of(bj::kA);
  const Fr d = field_of(bj::kD);
  const Lc beta = b.mul(p.x, q.y);
  const Lc gamma = b.mul(p.y, q.x);
  const Lc delta = b.mul(p.x * (-a) + p.y, q.x + q.y);
  const Lc tau = b.mul(beta, gamma);
  PointVar out;
  out.x = b.div(beta + gamma, tau * d + Fr::one());
  out.y = b.div(delta + beta * a - gamma, Lc::constant(Fr::one()) - tau * d);
  return out;
}

PointVar point_double(CircuitBuilder& b, const PointVar& p) { return point_add(b, p, p); }

PointVar point_select(CircuitBuilder& b, Var bit, const PointVar& p) {
  PointVar out;
  out.x = b.mul(bit, p.x);
  out.y = b.mul(bit, p.y - Fr::one()) + Fr::one();
  return out;
}

PointVar mul_by_cofactor(CircuitBuilder& b, const PointVar& p) {
  PointVar acc = p;
  for (unsigned k = 1; k < bj::kCofactor; k <<= 1) acc = point_double(b, acc);
  return acc;
}

PointVar scalar_mul(CircuitBuilder& b, std::span<const Var> bits, const PointVar& p) {
  PointVar acc = PointVar::constant(bj::CurvePoint::identity());
  for (std::size_t i = bits.size(); i-- > 0;) {
    acc = point_double(b, acc);
    acc = point_add(b, acc, point_select(b, bits[i], p));
  }
  return acc;
}

PointVar fixed_base_mul(CircuitBuilder& b, std::span<const Var> bits, const bj::CurvePoint& p) {
  PointVar acc = PointVar::constant(bj::CurvePoint::identity());
  bj::CurvePoint power = p;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    acc = point_add(b, acc, point_select(b, bits[i], PointVar::constant(power)));
    power = bj::detail::add_unchecked(power, power);
  }
  return acc;
}

void eddsa_verify(CircuitBuilder& b, const PointVar& public_key, const Lc& msg, const PointVar& r,
                  const Lc& s) {
  assert_on_curve(b, public_key);
  assert_on_curve(b, r);

  const std::vector<Var> s_bits = b.to_bits(s, bj::kSubgroupOrder.bit_length());
  b.enforce_bits_le(s_bits, bj::kSubgroupOrder - U256(1));

  const Lc h = poseidon(b, {r.x, r.y, public_key.x, public_key.y, msg});
  const std::vector<Var> h_bits = b.to_bits(h, Fr::kModulus.bit_length());
  b.enforce_bits_le(h_bits, Fr::kModulus - U256(1));

  static const bj::CurvePoint kBase8 = bj::mul_by_cofactor(bj::base_point());
  const PointVar lhs = fixed_base_mul(b, s_bits, kBase8);
  const PointVar rhs = mul_by_cofactor(b, point_add(b, r, scalar_mul(b, h_bits, public_key)));
  assert_equal(b, lhs, rhs);
}

Lc merkle_root(CircuitBuilder& b, std::span<const Lc> leaves, std::size_t depth) {
  const std::size_t width = std::size_t{1} << depth;
  if (leaves.empty() || leaves.size() > width) throw std::logic_error("merkle_root: leaf count does not fit depth");
  std::vector<Lc> level(width);
  std::copy(leaves.begin(), leaves.end(), level.begin());
  while (level.size() > 1) {
    std::vector<Lc> next(level.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = poseidon(b, {level[2 * i], level[2 * i + 1]});
    level = std::move(next);
  }
  return level[0];
}

void range_check_fixed(CircuitBuilder& b, const Lc& signed_value) {
  b.range_check(encode_offset(signed_value), 32);
}

Lc decode_offset(CircuitBuilder& b, const Lc& encoded) {
  b.range_check(encoded, 32);
  return encoded - Fr::from_u64(kFieldOffset);
}

Lc fixed_mul(CircuitBuilder& b, const Lc& a, const Lc& c) {
  const Lc product = b.mul(a, c);
  const auto [q, r] = b.div_mod(product, std::uint64_t{1} << kFractionBits);
  range_check_fixed(b, q);
  b.range_check(r, kFractionBits);
  return q;
}

Lc floor_div(CircuitBuilder& b, const Lc& n, std::uint64_t d) {
  if (d == 0) throw std::logic_error("floor_div by zero");
  const auto [q, r] = b.div_mod(n, d);
  range_check_fixed(b, q);
  const unsigned k = U256(d).bit_length();
  b.range_check(r, k);
  b.range_check(Lc::constant(Fr::from_u64(d - 1)) - r, k);
  return q;
}

ModelVars local_learn(CircuitBuilder& b, const ModelVars& global, std::span<const RecordVars> records,
                      Fixed lr) {
  if (records.empty()) throw Error(ErrorCode::kEmptyBatch, "local_learn gadget over no records");
  Fixed::checked(lr.raw);
  const Lc lr_lc = Lc::constant(Fr::from_i64(lr.raw));

  ModelVars grad;
  for (const RecordVars& rec : records) {
    std::array<Var, kNumClasses> onehot{};
    Lc count;
    Lc weighted;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      onehot[c] = b.indicator(rec.label, c);
      count += onehot[c];
      weighted += Lc(onehot[c]) * Fr::from_u64(c);
    }
    b.enforce_equal(count, Lc::constant(Fr::one()));
    b.enforce_equal(weighted, rec.label);

    for (std::size_t c = 0; c < kNumClasses; ++c) {
      Lc score = global.biases[c];
      for (std::size_t j = 0; j < kNumFeatures; ++j) score += fixed_mul(b, global.weights[c][j], rec.features[j]);
      range_check_fixed(b, score);
      const Lc err = b.settle(score - Lc(onehot[c]) * Fr::from_u64(kFixedOne));
      range_check_fixed(b, err);
      for (std::size_t j = 0; j < kNumFeatures; ++j) grad.weights[c][j] += fixed_mul(b, err, rec.features[j]);
      grad.biases[c] += err;
    }
  }

  const std::uint64_t divisor = 3 * records.size();
  auto step = [&](const Lc& old, const Lc& g_sum) {
    const Lc g = b.settle(g_sum);
    range_check_fixed(b, g);
    const Lc scaled = floor_div(b, g, divisor);
    const Lc updated = b.settle(old - fixed_mul(b, lr_lc, scaled));
    range_check_fixed(b, updated);
    return updated;
  };

  ModelVars out;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t j = 0; j < kNumFeatures; ++j) out.weights[c][j] = step(global.weights[c][j], grad.weights[c][j]);
    out.biases[c] = step(global.biases[c], grad.biases[c]);
  }
  return out;
}

}  // namespace vfl::gadgets
