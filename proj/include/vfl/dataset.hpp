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
#include <istream>
#include <random>
#include <string>
#include <vector>

#include "vfl/commitments.hpp"

namespace vfl::harness {

struct Dataset {
  std::vector<DataRecord> train;
  std::vector<DataRecord> test;
};

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);
/// Standard normal by Box-Muller; consumes two draws.
double standard_normal(std::mt19937_64& rng);
/// Fisher-Yates shuffle driven by `rng`.
void shuffle_records(std::vector<DataRecord>& records, std::mt19937_64& rng);

/// Seeded shuffle then a train/test split (train gets floor(0.8 n)).
Dataset split_dataset(std::vector<DataRecord> records, std::uint64_t seed);

/// Six Gaussian clusters in [0,1)^9: centers uniform in [0.15, 0.85] and
/// redrawn until pairwise at least 0.75 apart, per-coordinate standard
/// deviation 0.06, clamped into [0, 0.999].
std::vector<DataRecord> synthetic_blobs(std::size_t per_class, std::uint64_t seed);

/// Parses CSV text: one header line, then rows whose first nine columns are
/// numeric features and whose last column is the class. Features are min-max
/// normalised per column to raw values in [0, 65535]; the six most frequent
/// classes (ties by first appearance) become labels 0..5 and other rows are
/// dropped. Throws MalformedRow(line) or Error(kTooFewClasses).
std::vector<DataRecord> parse_csv(std::istream& in);

/// parse_csv on a file, then split_dataset. Throws Error(kConfig) if the
/// file cannot be opened.
Dataset ingest_dataset(const std::string& path, std::uint64_t seed);

}  // namespace vfl::harness
