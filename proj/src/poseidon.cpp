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

#include "vfl/poseidon.hpp"

#include "vfl/error.hpp"

namespace vfl {

namespace {

#include "vfl/detail/poseidon_constants.inc"

PoseidonParams make_default_params() {
  PoseidonParams p;
  for (const char* c : kPoseidonRoundConstants) p.round_constants.push_back(Fr::from_string(c));
  p.mds.resize(p.t);
  for (std::size_t i = 0; i < p.t; ++i) {
    for (std::size_t j = 0; j < p.t; ++j) p.mds[i].push_back(Fr::from_string(kPoseidonMds[i][j]));
  }
  return p;
}

Fr sbox(const Fr& x, unsigned alpha) {
  if (alpha == 5) {
    const Fr x2 = x.square();
    return x2.square() * x;
  }
  return x.pow(U256(alpha));
}

}  // namespace

const PoseidonParams& poseidon_params() {
  static const PoseidonParams params = make_default_params();
  return params;
}

void poseidon_permute(std::span<Fr> state, const PoseidonParams& params) {
  const std::size_t t = params.t;
  std::array<Fr, 8> mixed{};
  for (std::size_t r = 0; r < params.rounds(); ++r) {
    for (std::size_t i = 0; i < t; ++i) state[i] += params.round_constants[r * t + i];
    if (params.is_full_round(r)) {
      for (std::size_t i = 0; i < t; ++i) state[i] = sbox(state[i], params.alpha);
    } else {
      state[0] = sbox(state[0], params.alpha);
    }
    for (std::size_t i = 0; i < t; ++i) {
      Fr acc;
      for (std::size_t j = 0; j < t; ++j) acc += params.mds[i][j] * state[j];
      mixed[i] = acc;
    }
    for (std::size_t i = 0; i < t; ++i) state[i] = mixed[i];
  }
}

Fr poseidon_hash(std::span<const Fr> inputs, const PoseidonParams& params) {
  if (inputs.empty()) throw Error(ErrorCode::kEmptyInput, "poseidon_hash needs at least one input");
  std::array<Fr, 3> state{};
  state[1] = inputs[0];
  if (inputs.size() > 1) state[2] = inputs[1];
  poseidon_permute(state, params);
  for (std::size_t i = 2; i < inputs.size(); ++i) {
    std::array<Fr, 3> next{Fr::zero(), state[0], inputs[i]};
    poseidon_permute(next, params);
    state = next;
  }
  return state[0];
}

}  // namespace vfl
