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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vfl/binary_io.hpp"
#include "vfl/field.hpp"

namespace vfl::r1cs {

/// Index into the assignment vector z. z[0] is the constant one, followed by
/// public inputs, public outputs, private inputs, then auxiliaries.
using Var = std::uint32_t;
inline constexpr Var kOne = 0;

// Terms reference an interned coefficient table; index 0 is always 1 and
// index 1 is always -1.
struct PackedTerm {
  Var var;
  std::uint32_t coeff;
};

/// Half-open range into ConstraintSystem::terms.
struct LcSpan {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// <A,z> * <B,z> = <C,z>
struct Constraint {
  LcSpan a, b, c;
};

/// Witness-solver instruction. Executed in order during synthesis; each one
/// assigns `count` consecutive variables starting at `target`.
enum class HintKind : std::uint8_t {
  kLinear = 1,     // z[t] = <in0>
  kProduct = 2,    // z[t] = <in0> * <in1>
  kQuotient = 3,   // z[t] = <in0> / <in1>, or 0 when <in1> = 0
  kBits = 4,       // z[t+i] = bit i of canonical <in0>, i < count
  kDivMod = 5,     // signed <in0> = q * param + r with 0 <= r < param; z[t] = q, z[t+1] = r
  kIndicator = 6,  // z[t] = (<in0> == param) ? 1 : 0
};

struct Hint {
  HintKind kind = HintKind::kLinear;
  Var target = 0;
  std::uint32_t count = 1;
  std::uint64_t param = 0;
  LcSpan in0, in1;
};

/// Rank-1 constraint system together with the witness program that solves
/// its auxiliary variables. Immutable once built; safe to share across threads.
class ConstraintSystem {
 public:
  std::string label;
  std::uint32_t num_public_inputs = 0;
  std::uint32_t num_public_outputs = 0;
  std::uint32_t num_private_inputs = 0;
  std::uint32_t num_aux = 0;

  std::vector<Fr> coefficients{Fr::one(), -Fr::one()};
  std::vector<PackedTerm> terms;
  std::vector<Constraint> constraints;
  std::vector<Hint> hints;

  std::uint32_t num_public() const { return num_public_inputs + num_public_outputs; }
  std::uint32_t num_private() const { return num_private_inputs + num_aux; }
  std::size_t num_variables() const { return 1 + std::size_t{num_public()} + num_private(); }
  std::size_t num_constraints() const { return constraints.size(); }

  Var first_public_output() const { return 1 + num_public_inputs; }
  Var first_private_input() const { return 1 + num_public(); }

  Fr evaluate(LcSpan lc, std::span<const Fr> z) const {
    Fr acc;
    for (std::uint32_t i = lc.begin; i < lc.end; ++i) {
      const PackedTerm& t = terms[i];
      if (t.coeff == 0) {
        acc += z[t.var];
      } else if (t.coeff == 1) {
        acc -= z[t.var];
      } else {
        acc += coefficients[t.coeff] * z[t.var];
      }
    }
    return acc;
  }

  bool holds(std::size_t constraint_index, std::span<const Fr> z) const {
    const Constraint& c = constraints[constraint_index];
    return evaluate(c.a, z) * evaluate(c.b, z) == evaluate(c.c, z);
  }

  /// Canonical binary form: versioned header (label, counts), the constraint
  /// triples as (index, value) pairs, then the witness program. Streamed in
  /// chunks to `sink`.
  void serialize(const std::function<void(std::span<const std::uint8_t>)>& sink) const;
  std::vector<std::uint8_t> serialize() const;
  /// Throws Error(kMalformedData).
  static ConstraintSystem deserialize(std::span<const std::uint8_t> bytes);

  /// SHA-256 of the canonical serialization.
  Digest digest() const;
};

struct Witness {
  std::vector<Fr> assignment;
};

/// Index of the first violated constraint, if any. Throws
/// Error(kLengthMismatch) when the assignment has the wrong length.
std::optional<std::size_t> first_violation(const ConstraintSystem& cs, std::span<const Fr> z);

/// True iff every constraint holds. Throws Error(kLengthMismatch).
bool check_satisfaction(const ConstraintSystem& cs, const Witness& w);

/// Runs the witness program over z. With `keep_public` set, hints that would
/// assign a public variable are skipped so claimed public values stay put.
void solve(const ConstraintSystem& cs, std::vector<Fr>& z, bool keep_public);

/// Builds the full assignment from public inputs (not outputs) and private
/// inputs. Throws Error(kArityMismatch) for wrong input counts and
/// UnsatisfiableInputs naming the first violated constraint.
Witness synthesize_witness(const ConstraintSystem& cs, std::span<const Fr> public_inputs,
                           std::span<const Fr> private_inputs);

/// Public section (inputs then outputs) of a witness.
std::vector<Fr> public_values(const ConstraintSystem& cs, const Witness& w);
std::vector<Fr> public_outputs(const ConstraintSystem& cs, const Witness& w);
std::vector<Fr> private_inputs(const ConstraintSystem& cs, const Witness& w);

}  // namespace vfl::r1cs
