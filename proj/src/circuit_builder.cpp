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

#include "vfl/circuit_builder.hpp"

#include <algorithm>
#include <stdexcept>

namespace vfl::r1cs {

void Lc::compact() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coeff.is_zero(); });
  terms_ = std::move(out);
}

CircuitBuilder::CircuitBuilder(std::string label) {
  cs_.label = std::move(label);
  coeff_index_.emplace(Fr::one(), 0);
  coeff_index_.emplace(-Fr::one(), 1);
}

void CircuitBuilder::enter(Phase p) {
  if (p < phase_) throw std::logic_error("circuit variables declared out of layout order");
  phase_ = p;
}

Var CircuitBuilder::public_input() {
  enter(Phase::kPublicInputs);
  ++cs_.num_public_inputs;
  return next_var_++;
}

Var CircuitBuilder::public_output() {
  enter(Phase::kPublicOutputs);
  ++cs_.num_public_outputs;
  return next_var_++;
}

Var CircuitBuilder::private_input() {
  enter(Phase::kPrivateInputs);
  ++cs_.num_private_inputs;
  return next_var_++;
}

Var CircuitBuilder::aux(std::uint32_t n) {
  enter(Phase::kAux);
  cs_.num_aux += n;
  const Var first = next_var_;
  next_var_ += n;
  return first;
}

std::uint32_t CircuitBuilder::intern(const Fr& c) {
  auto [it, inserted] = coeff_index_.emplace(c, static_cast<std::uint32_t>(cs_.coefficients.size()));
  if (inserted) cs_.coefficients.push_back(c);
  return it->second;
}

LcSpan CircuitBuilder::pack(Lc lc) {
  lc.compact();
  LcSpan span{static_cast<std::uint32_t>(cs_.terms.size()), 0};
  for (const auto& t : lc.terms()) cs_.terms.push_back(PackedTerm{t.var, intern(t.coeff)});
  span.end = static_cast<std::uint32_t>(cs_.terms.size());
  return span;
}

void CircuitBuilder::enforce(const Lc& a, const Lc& b, const Lc& c) {
  Constraint con;
  con.a = pack(a);
  con.b = pack(b);
  con.c = pack(c);
  cs_.constraints.push_back(con);
}

void CircuitBuilder::add_hint(HintKind kind, Var target, std::uint32_t count, const Lc& in0, const Lc& in1,
                              std::uint64_t param) {
  Hint h;
  h.kind = kind;
  h.target = target;
  h.count = count;
  h.param = param;
  h.in0 = pack(in0);
  h.in1 = pack(in1);
  cs_.hints.push_back(h);
}

Lc CircuitBuilder::mul(const Lc& a, const Lc& b) {
  if (a.is_constant()) return b * a.constant_value();
  if (b.is_constant()) return a * b.constant_value();
  const Var v = aux();
  add_hint(HintKind::kProduct, v, 1, a, b);
  enforce(a, b, v);
  return v;
}

Lc CircuitBuilder::div(const Lc& num, const Lc& den) {
  if (den.is_constant() && !den.constant_value().is_zero()) return num * den.constant_value().inverse();
  const Var v = aux();
  add_hint(HintKind::kQuotient, v, 1, num, den);
  enforce(v, den, num);
  return v;
}

Var CircuitBuilder::materialize(const Lc& lc) {
  const Var v = aux();
  add_hint(HintKind::kLinear, v, 1, lc);
  enforce_equal(lc, v);
  return v;
}

Lc CircuitBuilder::settle(const Lc& lc) {
  if (lc.is_constant()) return lc;
  if (lc.terms().size() == 1 && lc.terms()[0].coeff.is_one()) return lc;
  Lc c = lc;
  c.compact();
  if (c.terms().size() == 1 && c.terms()[0].coeff.is_one()) return c;
  return materialize(c);
}

void CircuitBuilder::bind_output(Var out, const Lc& lc) {
  if (out < cs_.first_public_output() || out >= cs_.first_private_input()) {
    throw std::logic_error("bind_output on a non-output variable");
  }
  add_hint(HintKind::kLinear, out, 1, lc);
  enforce_equal(lc, out);
}

std::vector<Var> CircuitBuilder::to_bits(const Lc& v, unsigned nbits) {
  const Var first = aux(nbits);
  add_hint(HintKind::kBits, first, nbits, v);
  std::vector<Var> bits(nbits);
  Lc sum;
  Fr weight = Fr::one();
  for (unsigned i = 0; i < nbits; ++i) {
    bits[i] = first + i;
    enforce_boolean(bits[i]);
    sum += Lc(bits[i]) * weight;
    weight += weight;
  }
  enforce_equal(sum, v);
  return bits;
}

void CircuitBuilder::enforce_bits_le(std::span<const Var> bits, const U256& bound) {
  if (bits.size() < bound.bit_length()) {
    throw std::logic_error("enforce_bits_le needs at least as many bits as the bound");
  }
  // eq tracks "all higher bits equal the bound's bits".
  Lc eq = Lc::constant(Fr::one());
  for (std::size_t k = bits.size(); k-- > 0;) {
    const bool bound_bit = k < 256 && bound.bit(static_cast<unsigned>(k));
    if (bound_bit) {
      eq = mul(eq, bits[k]);
    } else {
      enforce(eq, bits[k], Lc());
    }
  }
}

Var CircuitBuilder::indicator(const Lc& v, std::uint64_t k) {
  const Var e = aux();
  add_hint(HintKind::kIndicator, e, 1, v, Lc(), k);
  enforce_boolean(e);
  return e;
}

std::pair<Var, Var> CircuitBuilder::div_mod(const Lc& v, std::uint64_t d) {
  const Var q = aux(2);
  add_hint(HintKind::kDivMod, q, 2, v, Lc(), d);
  enforce_equal(v, Lc(q) * Fr::from_u64(d) + Lc(q + 1));
  return {q, q + 1};
}

ConstraintSystem CircuitBuilder::finalize() && { return std::move(cs_); }

}  // namespace vfl::r1cs
