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

#include "vfl/learner.hpp"

#include "vfl/error.hpp"
#include "vfl/poseidon.hpp"

namespace vfl {

std::vector<Fr> ModelParams::to_fields() const {
  std::vector<Fr> out;
  out.reserve(kNumFields);
  for (const auto& row : weights) {
    for (Fixed w : row) out.push_back(to_field(w));
  }
  for (Fixed b : biases) out.push_back(to_field(b));
  out.push_back(Fr::from_u64(version));
  return out;
}

ModelParams ModelParams::from_fields(std::span<const Fr> fields) {
  if (fields.size() != kNumFields) throw Error(ErrorCode::kLengthMismatch, "model field count");
  ModelParams m;
  std::size_t k = 0;
  for (auto& row : m.weights) {
    for (Fixed& w : row) w = fixed_from_field(fields[k++]);
  }
  for (Fixed& b : m.biases) b = fixed_from_field(fields[k++]);
  const U256 v = fields[k].to_u256();
  if (v.limbs[1] != 0 || v.limbs[2] != 0 || v.limbs[3] != 0) {
    throw Error(ErrorCode::kRangeExceeded, "model version");
  }
  m.version = v.limbs[0];
  return m;
}

nlohmann::json ModelParams::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : weights) {
    for (Fixed w : row) arr.push_back(w.raw);
  }
  for (Fixed b : biases) arr.push_back(b.raw);
  arr.push_back(version);
  return arr;
}

ModelParams ModelParams::from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != kNumFields) {
    throw Error(ErrorCode::kLengthMismatch, "model JSON must be a flat array of 61 numbers");
  }
  ModelParams m;
  std::size_t k = 0;
  for (auto& row : m.weights) {
    for (Fixed& w : row) w = Fixed::checked(j[k++].get<std::int64_t>());
  }
  for (Fixed& b : m.biases) b = Fixed::checked(j[k++].get<std::int64_t>());
  m.version = j[k].get<std::uint64_t>();
  return m;
}

Fr batch_message(const Fr& root, std::uint64_t counter) {
  return poseidon_hash({root, Fr::from_u64(counter)});
}

Scores forward(const ModelParams& model, const Features& x) {
  Scores scores;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::int64_t acc = model.biases[c].raw;
    for (std::size_t j = 0; j < kNumFeatures; ++j) acc += fixed_mul(model.weights[c][j], x[j]).raw;
    scores[c] = Fixed::checked(acc);
  }
  return scores;
}

std::size_t predict(const Scores& scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

namespace {

std::int64_t onehot(std::uint32_t label, std::size_t c) { return label == c ? kFixedOne : 0; }

}  // namespace

Fixed mse_loss(const Scores& scores, std::uint32_t label) {
  if (label >= kNumClasses) throw Error(ErrorCode::kRangeExceeded, "label must be below 6");
  std::int64_t acc = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const Fixed e = Fixed::checked(scores[c].raw - onehot(label, c));
    acc += fixed_mul(e, e).raw;
  }
  return Fixed::checked(floor_div(acc, static_cast<std::int64_t>(kNumClasses)));
}

ModelParams local_learn(const ModelParams& global, std::span<const DataRecord> records, Fixed lr) {
  if (records.empty()) throw Error(ErrorCode::kEmptyBatch, "local_learn over no records");
  Fixed::checked(lr.raw);
  for (const auto& row : global.weights) {
    for (Fixed w : row) Fixed::checked(w.raw);
  }
  for (Fixed b : global.biases) Fixed::checked(b.raw);
  std::array<std::array<std::int64_t, kNumFeatures>, kNumClasses> grad_w{};
  std::array<std::int64_t, kNumClasses> grad_b{};

  for (const DataRecord& rec : records) {
    if (rec.label >= kNumClasses) throw Error(ErrorCode::kRangeExceeded, "label must be below 6");
    for (Fixed f : rec.features) Fixed::checked(f.raw);
    const Scores scores = forward(global, rec.features);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const Fixed e = Fixed::checked(scores[c].raw - onehot(rec.label, c));
      for (std::size_t j = 0; j < kNumFeatures; ++j) grad_w[c][j] += fixed_mul(e, rec.features[j]).raw;
      grad_b[c] += e.raw;
    }
  }

  const auto divisor = static_cast<std::int64_t>(3 * records.size());
  auto step = [&](Fixed old, std::int64_t grad) {
    const Fixed g = Fixed::checked(grad);
    const Fixed scaled = Fixed::checked(floor_div(g.raw, divisor));
    return Fixed::checked(old.raw - fixed_mul(lr, scaled).raw);
  };

  ModelParams out;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t j = 0; j < kNumFeatures; ++j) out.weights[c][j] = step(global.weights[c][j], grad_w[c][j]);
    out.biases[c] = step(global.biases[c], grad_b[c]);
  }
  out.version = global.version + 1;
  return out;
}

}  // namespace vfl
