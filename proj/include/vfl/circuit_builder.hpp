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
#include <unordered_map>
#include <utility>
#include <vector>

#include "vfl/field.hpp"
#include "vfl/r1cs.hpp"

namespace vfl::r1cs {

/// Sparse linear combination over assignment variables; the constant term is
/// carried on variable kOne.
class Lc {
 public:
  struct Term {
    Var var;
    Fr coeff;
  };

  Lc() = default;
  Lc(Var v) : terms_{{v, Fr::one()}} {}  // NOLINT(google-explicit-constructor)

  static Lc constant(const Fr& c) {
    Lc lc;
    if (!c.is_zero()) lc.terms_.push_back({kOne, c});
    return lc;
  }
  static Lc constant(std::int64_t c) { return constant(Fr::from_i64(c)); }

  const std::vector<Term>& terms() const { return terms_; }

  bool is_constant() const {
    for (const Term& t : terms_) {
      if (t.var != kOne) return false;
    }
    return true;
  }

  /// Sum of the kOne terms.
  Fr constant_value() const {
    Fr c;
    for (const Term& t : terms_) {
      if (t.var == kOne) c += t.coeff;
    }
    return c;
  }

  Lc& operator+=(const Lc& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    compact_if_large();
    return *this;
  }

  Lc& operator-=(const Lc& o) {
    for (const Term& t : o.terms_) terms_.push_back({t.var, -t.coeff});
    compact_if_large();
    return *this;
  }

  Lc& operator*=(const Fr& k) {
    if (k.is_zero()) {
      terms_.clear();
    } else {
      for (Term& t : terms_) t.coeff *= k;
    }
    return *this;
  }

  friend Lc operator+(Lc a, const Lc& b) { return a += b; }
  friend Lc operator-(Lc a, const Lc& b) { return a -= b; }
  friend Lc operator*(Lc a, const Fr& k) { return a *= k; }
  friend Lc operator*(const Fr& k, Lc a) { return a *= k; }
  friend Lc operator+(Lc a, const Fr& c) { return a += constant(c); }
  friend Lc operator-(Lc a, const Fr& c) { return a -= constant(c); }

  /// Merges duplicate variables and drops zero coefficients; sorted by var.
  void compact();

 private:
  void compact_if_large() {
    if (terms_.size() > 64) compact();
  }

  std::vector<Term> terms_;
};

/// Incrementally builds a ConstraintSystem and its witness program.
/// Variables must be declared in layout order: public inputs, public
/// outputs, private inputs, then auxiliaries.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::string label);

  Var public_input();
  Var public_output();
  Var private_input();
  /// Allocates `n` consecutive auxiliary variables.
  Var aux(std::uint32_t n = 1);

  void enforce(const Lc& a, const Lc& b, const Lc& c);
  void enforce_equal(const Lc& a, const Lc& b) { enforce(a, Lc::constant(Fr::one()), b); }
  void enforce_boolean(const Lc& v) { enforce(v, v, v); }

  void add_hint(HintKind kind, Var target, std::uint32_t count, const Lc& in0, const Lc& in1 = Lc(),
                std::uint64_t param = 0);

  /// v = a * b; constant operands fold to a linear result.
  Lc mul(const Lc& a, const Lc& b);
  /// v with v * den = num; a constant denominator folds to a linear result.
  Lc div(const Lc& num, const Lc& den);
  /// New variable constrained equal to `lc`.
  Var materialize(const Lc& lc);
  /// `lc` itself when it is a constant or a bare variable, else materialize(lc).
  Lc settle(const Lc& lc);
  /// Assigns a declared public output and constrains it to `lc`.
  void bind_output(Var out, const Lc& lc);

  /// Little-endian boolean decomposition; unsatisfiable if the value needs
  /// more than `nbits` bits.
  std::vector<Var> to_bits(const Lc& v, unsigned nbits);
  void range_check(const Lc& v, unsigned nbits) { to_bits(v, nbits); }
  /// Constrains the integer with the given little-endian bits to be <= bound.
  void enforce_bits_le(std::span<const Var> bits, const U256& bound);
  /// Boolean (v == k).
  Var indicator(const Lc& v, std::uint64_t k);
  /// (q, r) with signed v = q * d + r, 0 <= r < d. Only the defining
  /// equation is enforced; callers range-check q and r.
  std::pair<Var, Var> div_mod(const Lc& v, std::uint64_t d);

  std::size_t num_constraints() const { return cs_.constraints.size(); }

  ConstraintSystem finalize() &&;

 private:
  enum class Phase { kPublicInputs, kPublicOutputs, kPrivateInputs, kAux };
  void enter(Phase p);
  LcSpan pack(Lc lc);
  std::uint32_t intern(const Fr& c);

  ConstraintSystem cs_;
  Phase phase_ = Phase::kPublicInputs;
  Var next_var_ = 1;
  std::unordered_map<Fr, std::uint32_t> coeff_index_;
};

}  // namespace vfl::r1cs
