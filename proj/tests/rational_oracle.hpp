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

// Exact rational reference for the learner, independent of the fixed-point
// code paths.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "vfl/learner.hpp"

namespace vfl::testing {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_rational real(Fixed f) { return cpp_rational(f.raw, kFixedOne); }

inline cpp_int floor_of(const cpp_rational& q) {
  const cpp_int n = numerator(q);
  const cpp_int d = denominator(q);
  cpp_int f = n / d;
  if (n % d != 0 && n < 0) --f;
  return f;
}

// Real value -> raw, flooring, failing outside the raw bound.
inline std::int64_t to_raw(const cpp_rational& q) {
  const cpp_int r = floor_of(q * kFixedOne);
  if (r < -kRawBound || r >= kRawBound) throw std::overflow_error("raw bound");
  return static_cast<std::int64_t>(r);
}

inline cpp_rational truncate(const cpp_rational& q) { return cpp_rational(to_raw(q), kFixedOne); }

/// local_learn with every intermediate held as an exact rational and
/// truncated to the 2^-16 grid exactly where the fixed-point rules truncate.
inline ModelParams truncated_rational_learn(const ModelParams& g, std::span<const DataRecord> records, Fixed lr) {
  const std::size_t n = records.size();
  std::array<std::array<cpp_rational, kNumFeatures>, kNumClasses> gw;
  std::array<cpp_rational, kNumClasses> gb;
  for (const DataRecord& r : records) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      cpp_rational s = real(g.biases[c]);
      for (std::size_t j = 0; j < kNumFeatures; ++j) s += truncate(real(g.weights[c][j]) * real(r.features[j]));
      (void)to_raw(s);
      const cpp_rational e = s - (r.label == c ? 1 : 0);
      (void)to_raw(e);
      for (std::size_t j = 0; j < kNumFeatures; ++j) gw[c][j] += truncate(e * real(r.features[j]));
      gb[c] += e;
    }
  }
  auto step = [&](Fixed old, const cpp_rational& grad) {
    (void)to_raw(grad);
    const cpp_rational scaled = truncate(grad / (3 * static_cast<long>(n)));
    return Fixed{to_raw(real(old) - truncate(real(lr) * scaled))};
  };
  ModelParams out;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t j = 0; j < kNumFeatures; ++j) out.weights[c][j] = step(g.weights[c][j], gw[c][j]);
    out.biases[c] = step(g.biases[c], gb[c]);
  }
  out.version = g.version + 1;
  return out;
}

/// Untruncated parameters as rationals: 54 weights then 6 biases.
using RationalParams = std::array<cpp_rational, ModelParams::kNumParams>;

/// Mean over records of (1/6) * sum_c (W x + b - onehot)_c^2.
inline cpp_rational rational_loss(const RationalParams& p, std::span<const DataRecord> records) {
  cpp_rational total = 0;
  for (const DataRecord& r : records) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      cpp_rational s = p[kNumClasses * kNumFeatures + c];
      for (std::size_t j = 0; j < kNumFeatures; ++j) s += p[c * kNumFeatures + j] * real(r.features[j]);
      const cpp_rational e = s - (r.label == c ? 1 : 0);
      total += e * e;
    }
  }
  return total / (6 * static_cast<long>(records.size()));
}

/// Closed-form gradient of rational_loss: (1/(3n)) sum e x and (1/(3n)) sum e.
inline RationalParams rational_gradient(const RationalParams& p, std::span<const DataRecord> records) {
  RationalParams g;
  for (const DataRecord& r : records) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      cpp_rational s = p[kNumClasses * kNumFeatures + c];
      for (std::size_t j = 0; j < kNumFeatures; ++j) s += p[c * kNumFeatures + j] * real(r.features[j]);
      const cpp_rational e = s - (r.label == c ? 1 : 0);
      for (std::size_t j = 0; j < kNumFeatures; ++j) g[c * kNumFeatures + j] += e * real(r.features[j]);
      g[kNumClasses * kNumFeatures + c] += e;
    }
  }
  for (auto& v : g) v /= 3 * static_cast<long>(records.size());
  return g;
}

/// Largest relative error between the closed-form gradient and central
/// differences (step h) over every parameter.
inline double max_gradient_error(const RationalParams& p, std::span<const DataRecord> records,
                                 const cpp_rational& h) {
  const RationalParams g = rational_gradient(p, records);
  double worst = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    RationalParams plus = p, minus = p;
    plus[k] += h;
    minus[k] -= h;
    const cpp_rational fd = (rational_loss(plus, records) - rational_loss(minus, records)) / (2 * h);
    const double gd = static_cast<double>(g[k]);
    const double err = std::abs(static_cast<double>(fd - g[k])) / std::max(1e-12, std::abs(gd));
    worst = std::max(worst, err);
  }
  return worst;
}

/// Same comparison with the loss evaluated in double precision, so the finite
/// differences carry real rounding error.
inline double max_gradient_error_double(const RationalParams& p, std::span<const DataRecord> records, double h) {
  std::array<double, ModelParams::kNumParams> x;
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = static_cast<double>(p[k]);
  auto loss = [&](const std::array<double, ModelParams::kNumParams>& q) {
    double total = 0;
    for (const DataRecord& r : records) {
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        double s = q[kNumClasses * kNumFeatures + c];
        for (std::size_t j = 0; j < kNumFeatures; ++j) s += q[c * kNumFeatures + j] * decode_fixed(r.features[j]);
        const double e = s - (r.label == c ? 1 : 0);
        total += e * e;
      }
    }
    return total / (6.0 * static_cast<double>(records.size()));
  };
  const RationalParams g = rational_gradient(p, records);
  double worst = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    auto plus = x, minus = x;
    plus[k] += h;
    minus[k] -= h;
    const double fd = (loss(plus) - loss(minus)) / (2 * h);
    const double gd = static_cast<double>(g[k]);
    worst = std::max(worst, std::abs(fd - gd) / std::max(1e-12, std::abs(gd)));
  }
  return worst;
}

}  // namespace vfl::testing
