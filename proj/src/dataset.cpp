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

#include "vfl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "vfl/error.hpp"

namespace vfl::harness {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r\"");
    const auto last = cell.find_last_not_of(" \t\r\"");
    cells.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void shuffle_records(std::vector<DataRecord>& records, std::mt19937_64& rng) {
  for (std::size_t i = records.size(); i > 1; --i) {
    const std::size_t j = rng() % i;
    std::swap(records[i - 1], records[j]);
  }
}

Dataset split_dataset(std::vector<DataRecord> records, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  shuffle_records(records, rng);
  const std::size_t k = records.size() * 4 / 5;
  Dataset d;
  d.train.assign(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(k));
  d.test.assign(records.begin() + static_cast<std::ptrdiff_t>(k), records.end());
  return d;
}

std::vector<DataRecord> synthetic_blobs(std::size_t per_class, std::uint64_t seed) {
  constexpr double kMinCenterDistance = 0.75;
  std::mt19937_64 rng(seed);
  std::array<std::array<double, kNumFeatures>, kNumClasses> centers{};
  for (std::size_t c = 0; c < kNumClasses;) {
    for (double& v : centers[c]) v = 0.15 + 0.7 * uniform01(rng);
    bool separated = true;
    for (std::size_t o = 0; o < c && separated; ++o) {
      double d2 = 0;
      for (std::size_t j = 0; j < kNumFeatures; ++j) d2 += (centers[c][j] - centers[o][j]) * (centers[c][j] - centers[o][j]);
      separated = d2 >= kMinCenterDistance * kMinCenterDistance;
    }
    if (separated) ++c;
  }
  std::vector<DataRecord> out;
  out.reserve(per_class * kNumClasses);
  for (std::uint32_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      DataRecord r;
      r.label = c;
      for (std::size_t j = 0; j < kNumFeatures; ++j) {
        const double v = std::clamp(centers[c][j] + 0.06 * standard_normal(rng), 0.0, 0.999);
        r.features[j] = encode_fixed(v);
      }
      out.push_back(r);
    }
  }
  return out;
}

std::vector<DataRecord> parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::kTooFewClasses, "empty CSV input");
  ++line_no;

  struct Row {
    std::array<double, kNumFeatures> x;
    std::string cls;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() < kNumFeatures + 1) throw MalformedRow(line_no, "expected at least 10 columns");
    Row row;
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      if (!parse_double(cells[j], row.x[j])) throw MalformedRow(line_no, "non-numeric feature '" + cells[j] + "'");
    }
    row.cls = cells.back();
    if (row.cls.empty()) throw MalformedRow(line_no, "empty class column");
    rows.push_back(std::move(row));
  }

  std::map<std::string, std::pair<std::size_t, std::size_t>> stats;  // class -> (count, first index)
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto [it, inserted] = stats.try_emplace(rows[i].cls, 0, i);
    ++it->second.first;
  }
  if (stats.size() < kNumClasses) {
    throw Error(ErrorCode::kTooFewClasses, "need 6 classes, found " + std::to_string(stats.size()));
  }
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> ranked(stats.begin(), stats.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.second.second < b.second.second;
  });
  std::map<std::string, std::uint32_t> label_of;
  for (std::uint32_t c = 0; c < kNumClasses; ++c) label_of[ranked[c].first] = c;

  std::array<double, kNumFeatures> lo{}, hi{};
  lo.fill(INFINITY);
  hi.fill(-INFINITY);
  for (const Row& r : rows) {
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      lo[j] = std::min(lo[j], r.x[j]);
      hi[j] = std::max(hi[j], r.x[j]);
    }
  }

  std::vector<DataRecord> out;
  for (const Row& r : rows) {
    const auto it = label_of.find(r.cls);
    if (it == label_of.end()) continue;
    DataRecord rec;
    rec.label = it->second;
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      const double span = hi[j] - lo[j];
      const double t = span > 0 ? (r.x[j] - lo[j]) / span : 0.0;
      rec.features[j] = Fixed{static_cast<std::int64_t>(std::floor(t * 65535.0))};
    }
    out.push_back(rec);
  }
  return out;
}

Dataset ingest_dataset(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open dataset " + path);
  return split_dataset(parse_csv(in), seed);
}

}  // namespace vfl::harness
