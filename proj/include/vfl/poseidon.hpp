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
#include <span>
#include <vector>

#include "vfl/field.hpp"

namespace vfl {

/// Poseidon instance over Fr. Constants are laid out round-major:
/// round_constants[r * t + i] is added to state element i in round r.
struct PoseidonParams {
  std::size_t t = 3;
  std::size_t full_rounds = 8;
  std::size_t partial_rounds = 57;
  unsigned alpha = 5;
  std::vector<Fr> round_constants;
  std::vector<std::vector<Fr>> mds;

  std::size_t rounds() const { return full_rounds + partial_rounds; }
  bool is_full_round(std::size_t r) const {
    return r < full_rounds / 2 || r >= full_rounds / 2 + partial_rounds;
  }
};

/// The embedded BN254 instance: t=3, alpha=5, 8 full and 57 partial rounds,
/// Grain-LFSR constants (circomlib compatible).
const PoseidonParams& poseidon_params();

/// Applies the permutation in place; `state` must hold params.t elements.
void poseidon_permute(std::span<Fr> state, const PoseidonParams& params = poseidon_params());

/// Hashes one or two elements with a single permutation over [0, in0, in1];
/// longer inputs are folded left: H(H(H(in0, in1), in2), ...).
/// Throws Error(kEmptyInput) for an empty list.
Fr poseidon_hash(std::span<const Fr> inputs, const PoseidonParams& params = poseidon_params());

inline Fr poseidon_hash(std::initializer_list<Fr> inputs) {
  return poseidon_hash(std::span<const Fr>(inputs.begin(), inputs.size()));
}

}  // namespace vfl
