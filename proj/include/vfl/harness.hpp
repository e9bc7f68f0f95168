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
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "vfl/learner.hpp"

namespace vfl::harness {

struct ExperimentConfig {
  std::size_t workers = 1;
  std::size_t devices_per_worker = 1;
  std::size_t batch_size = 10;
  std::size_t cycles = 300;
  std::uint64_t cycle_length_blocks = 10;
  double learning_rate = kDefaultLearningRate;
  std::uint64_t rng_seed = 1;
  std::string dataset = "synthetic";  // "synthetic" or "uci_condensed"
  std::string dataset_path;           // CSV, required for uci_condensed
  std::size_t synthetic_per_class = 400;
  std::string output_dir;             // empty: no files written

  /// Unknown keys and invalid values throw Error(kConfig).
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct CycleMetrics {
  std::size_t cycle = 0;
  double accuracy = 0;
  double test_loss = 0;
  std::uint64_t model_version = 0;
  std::size_t updates_accepted = 0;
  std::size_t updates_rejected = 0;
  std::string state_digest;
  // wall-clock, excluded from determinism comparisons
  double prove_seconds = 0;
  double verify_seconds = 0;
};

struct MetricsReport {
  ExperimentConfig config;
  std::map<std::string, std::size_t> constraint_counts;
  std::vector<CycleMetrics> cycles;
  std::map<std::string, std::size_t> tallies;  // "accepted" and rejection names
  std::size_t constraints_checked = 0;
  std::size_t unexpected_rejections = 0;
  std::string genesis_digest;
  std::string final_digest;
  ModelParams final_model;
  // wall-clock
  double build_seconds = 0;
  double setup_seconds = 0;
  double prove_seconds = 0;
  double verify_seconds = 0;
  double total_seconds = 0;

  double final_accuracy() const { return cycles.empty() ? 0.0 : cycles.back().accuracy; }

  /// One record per cycle, then a summary record. Wall times sit under the
  /// "wall" key of each record.
  std::vector<nlohmann::json> to_json_lines() const;
};

/// Builds circuits, runs setup, anchors the CA key, registers every device,
/// and runs cfg.cycles learning cycles. With a non-empty output_dir, writes
/// metrics.jsonl, transactions.log and model_final.json there.
MetricsReport run_experiment(const ExperimentConfig& cfg,
                             const std::function<void(const CycleMetrics&)>& on_cycle = {});

/// Accuracy and mean loss of `model` on `records`.
std::pair<double, double> evaluate(const ModelParams& model, const std::vector<DataRecord>& records);

struct ReplayResult {
  std::size_t transactions = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::string final_digest;
};

/// Rebuilds the circuits named in the log header and re-applies every
/// transaction to a fresh ledger.
ReplayResult replay_log(const std::string& path);

struct AttackOutcome {
  std::string name;
  std::string objective;
  std::string observed;
  bool rejected = false;
};

struct AttackReport {
  bool control_accepted = false;
  bool aggregation_audit = false;
  std::vector<AttackOutcome> attacks;

  bool all_passed() const;
  nlohmann::json to_json() const;
};

/// Honest control, aggregation audit, and the six adversarial fixtures.
AttackReport run_attack_suite(std::uint64_t seed = 7, std::size_t batch_size = 10);

/// Metrics lines with every "wall" key removed.
std::vector<nlohmann::json> strip_wall_times(std::vector<nlohmann::json> lines);

}  // namespace vfl::harness
