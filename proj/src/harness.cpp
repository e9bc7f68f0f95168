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

#include "vfl/harness.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <optional>
#include <random>

#include "vfl/actors.hpp"
#include "vfl/circuits.hpp"
#include "vfl/dataset.hpp"
#include "vfl/error.hpp"
#include "vfl/ledger.hpp"
#include "vfl/proof_system.hpp"

namespace vfl::harness {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string hex(const Fr& f) { return f.to_hex(); }

struct Deployment {
  std::shared_ptr<proof::ReferenceBackend> backend = std::make_shared<proof::ReferenceBackend>();
  actors::ProvingArtifacts registration;
  actors::ProvingArtifacts learning;
  proof::VerificationKey registration_vk;
  proof::VerificationKey learning_vk;
  double build_seconds = 0;
  double setup_seconds = 0;
};

Deployment deploy(std::size_t batch_size, Fixed lr) {
  Deployment d;
  auto start = Clock::now();
  auto reg = std::make_shared<const r1cs::ConstraintSystem>(circuits::build_registration_circuit());
  auto learn = std::make_shared<const r1cs::ConstraintSystem>(circuits::build_learning_circuit(batch_size, lr));
  d.build_seconds = seconds_since(start);

  start = Clock::now();
  proof::KeyPair reg_keys = d.backend->setup(reg);
  proof::KeyPair learn_keys = d.backend->setup(learn);
  d.setup_seconds = seconds_since(start);

  d.registration = actors::ProvingArtifacts{reg, reg_keys.proving};
  d.learning = actors::ProvingArtifacts{learn, learn_keys.proving};
  d.registration_vk = reg_keys.verification;
  d.learning_vk = learn_keys.verification;
  return d;
}

ledger::Transaction tx(std::string sender, ledger::Payload payload) {
  return ledger::Transaction{std::move(sender), std::move(payload)};
}

json log_header(const ExperimentConfig& cfg, const ModelParams& genesis) {
  return json{{"format", "vfl-txlog"},
              {"version", 1},
              {"batch_size", cfg.batch_size},
              {"learning_rate_raw", encode_fixed(cfg.learning_rate).raw},
              {"cycle_length_blocks", cfg.cycle_length_blocks},
              {"genesis", genesis.to_json()}};
}

std::string rejection_name(const ledger::Receipt& r) {
  return r.accepted ? "accepted" : std::string(ledger::to_string(*r.reason));
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "workers") c.workers = value.get<std::size_t>();
      else if (key == "devices_per_worker") c.devices_per_worker = value.get<std::size_t>();
      else if (key == "batch_size") c.batch_size = value.get<std::size_t>();
      else if (key == "cycles") c.cycles = value.get<std::size_t>();
      else if (key == "cycle_length_blocks") c.cycle_length_blocks = value.get<std::uint64_t>();
      else if (key == "learning_rate") c.learning_rate = value.get<double>();
      else if (key == "rng_seed") c.rng_seed = value.get<std::uint64_t>();
      else if (key == "dataset") c.dataset = value.get<std::string>();
      else if (key == "dataset_path") c.dataset_path = value.get<std::string>();
      else if (key == "synthetic_per_class") c.synthetic_per_class = value.get<std::size_t>();
      else if (key == "output_dir") c.output_dir = value.get<std::string>();
      else throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  return json{{"workers", workers},
              {"devices_per_worker", devices_per_worker},
              {"batch_size", batch_size},
              {"cycles", cycles},
              {"cycle_length_blocks", cycle_length_blocks},
              {"learning_rate", learning_rate},
              {"rng_seed", rng_seed},
              {"dataset", dataset},
              {"dataset_path", dataset_path},
              {"synthetic_per_class", synthetic_per_class},
              {"output_dir", output_dir}};
}

void ExperimentConfig::validate() const {
  if (workers == 0 || devices_per_worker == 0 || batch_size == 0 || cycle_length_blocks == 0) {
    throw Error(ErrorCode::kConfig, "workers, devices_per_worker, batch_size and cycle_length_blocks must be >= 1");
  }
  if (!(learning_rate > 0) || learning_rate >= 32768) throw Error(ErrorCode::kConfig, "learning_rate out of range");
  if (encode_fixed(learning_rate).raw == 0) throw Error(ErrorCode::kConfig, "learning_rate below fixed-point resolution");
  if (dataset != "synthetic" && dataset != "uci_condensed") {
    throw Error(ErrorCode::kConfig, "dataset must be 'synthetic' or 'uci_condensed'");
  }
  if (dataset == "uci_condensed" && dataset_path.empty()) {
    throw Error(ErrorCode::kConfig, "uci_condensed needs dataset_path");
  }
  if (dataset == "synthetic" && synthetic_per_class == 0) throw Error(ErrorCode::kConfig, "synthetic_per_class must be >= 1");
}

std::vector<json> MetricsReport::to_json_lines() const {
  std::vector<json> lines;
  for (const CycleMetrics& c : cycles) {
    lines.push_back(json{{"type", "cycle"},
                         {"cycle", c.cycle},
                         {"accuracy", c.accuracy},
                         {"test_loss", c.test_loss},
                         {"model_version", c.model_version},
                         {"updates_accepted", c.updates_accepted},
                         {"updates_rejected", c.updates_rejected},
                         {"state_digest", c.state_digest},
                         {"wall", {{"prove_s", c.prove_seconds}, {"verify_s", c.verify_seconds}}}});
  }
  lines.push_back(json{{"type", "summary"},
                       {"config", config.to_json()},
                       {"constraints", constraint_counts},
                       {"cycles", cycles.size()},
                       {"final_accuracy", final_accuracy()},
                       {"tallies", tallies},
                       {"constraints_checked", constraints_checked},
                       {"unexpected_rejections", unexpected_rejections},
                       {"genesis_digest", genesis_digest},
                       {"final_digest", final_digest},
                       {"wall",
                        {{"build_s", build_seconds},
                         {"setup_s", setup_seconds},
                         {"prove_s", prove_seconds},
                         {"verify_s", verify_seconds},
                         {"total_s", total_seconds}}}});
  return lines;
}

std::vector<json> strip_wall_times(std::vector<json> lines) {
  for (json& line : lines) line.erase("wall");
  return lines;
}

std::pair<double, double> evaluate(const ModelParams& model, const std::vector<DataRecord>& records) {
  if (records.empty()) return {0.0, 0.0};
  std::size_t correct = 0;
  double loss = 0;
  for (const DataRecord& r : records) {
    try {
      const Scores s = forward(model, r.features);
      if (predict(s) == r.label) ++correct;
      loss += decode_fixed(mse_loss(s, r.label));
    } catch (const Error&) {
      loss += 1.0;
    }
  }
  const auto n = static_cast<double>(records.size());
  return {static_cast<double>(correct) / n, loss / n};
}

MetricsReport run_experiment(const ExperimentConfig& cfg, const std::function<void(const CycleMetrics&)>& on_cycle) {
  cfg.validate();
  const auto run_start = Clock::now();
  MetricsReport report;
  report.config = cfg;

  const Dataset data = cfg.dataset == "synthetic"
                           ? split_dataset(synthetic_blobs(cfg.synthetic_per_class, cfg.rng_seed), cfg.rng_seed)
                           : ingest_dataset(cfg.dataset_path, cfg.rng_seed);
  if (data.train.empty()) throw Error(ErrorCode::kConfig, "dataset has no training records");

  const Fixed lr = encode_fixed(cfg.learning_rate);
  Deployment dep = deploy(cfg.batch_size, lr);
  report.build_seconds = dep.build_seconds;
  report.setup_seconds = dep.setup_seconds;
  report.constraint_counts[dep.registration.circuit->label] = dep.registration.circuit->num_constraints();
  report.constraint_counts[dep.learning.circuit->label] = dep.learning.circuit->num_constraints();

  const ModelParams genesis;
  ledger::Ledger chain(dep.backend, genesis, cfg.cycle_length_blocks);
  report.genesis_digest = hex(chain.state_digest());

  std::unique_ptr<ledger::TxLogWriter> log;
  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    const std::string header = log_header(cfg, genesis).dump();
    log = std::make_unique<ledger::TxLogWriter>(
        cfg.output_dir + "/transactions.log",
        std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(header.data()), header.size()));
  }
  chain.set_observer([&](const ledger::Transaction& t, const ledger::Receipt& r) {
    if (log) log->append(t);
    ++report.tallies[rejection_name(r)];
    report.constraints_checked += r.constraints_checked;
  });

  auto expect_accepted = [&report](const ledger::Receipt& r) {
    if (!r.accepted) ++report.unexpected_rejections;
    return r.accepted;
  };

  // Task initiator: CA, root-key anchor, verification keys.
  std::mt19937_64 rng(cfg.rng_seed);
  actors::CertificateAuthority ca(vfl::KeyPair::generate(rng));
  expect_accepted(chain.submit(tx("initiator", ledger::AnchorRootKey{ledger::RootPublicKey{ca.root_public_key()}})));
  expect_accepted(chain.submit(tx("initiator", ledger::RegisterVk{dep.registration_vk})));
  expect_accepted(chain.submit(tx("initiator", ledger::RegisterVk{dep.learning_vk})));

  // Devices: each gets an interleaved shard of the training split.
  const std::size_t total_devices = cfg.workers * cfg.devices_per_worker;
  std::vector<std::unique_ptr<actors::Worker>> workers;
  for (std::size_t w = 0; w < cfg.workers; ++w) {
    auto worker = std::make_unique<actors::Worker>("worker-" + std::to_string(w), dep.backend, chain, rng());
    worker->add_artifacts(dep.registration);
    worker->add_artifacts(dep.learning);
    for (std::size_t k = 0; k < cfg.devices_per_worker; ++k) {
      const std::size_t g = w * cfg.devices_per_worker + k;
      auto shard = std::make_shared<std::vector<DataRecord>>();
      for (std::size_t i = g; i < data.train.size(); i += total_devices) shard->push_back(data.train[i]);
      if (shard->empty()) throw Error(ErrorCode::kConfig, "more devices than training records");
      const vfl::KeyPair keys = vfl::KeyPair::generate(rng);
      const Signature cert = ca.issue(keys.public_key);
      worker->add_device(actors::Device(keys, cert, actors::DataSource(shard, /*cyclic=*/true)));
    }
    workers.push_back(std::move(worker));
  }
  for (auto& worker : workers) {
    for (std::size_t k = 0; k < worker->num_devices(); ++k) {
      const auto start = Clock::now();
      const auto root = chain.snapshot().anchored_root_key->point;
      const ledger::Transaction t = worker->prepare_registration(k, root);
      report.prove_seconds += seconds_since(start);
      const auto vstart = Clock::now();
      expect_accepted(chain.submit(t));
      report.verify_seconds += seconds_since(vstart);
    }
  }

  for (std::size_t cycle = 1; cycle <= cfg.cycles; ++cycle) {
    CycleMetrics m;
    m.cycle = cycle;
    const ModelParams global = chain.get_latest_model();

    // Proving runs per worker in parallel; submission follows worker order.
    auto prove_worker = [&](actors::Worker& worker) {
      std::vector<ledger::Transaction> txs;
      for (std::size_t k = 0; k < worker.num_devices(); ++k) {
        const LearningBatch batch = worker.device(k).emit_batch(cfg.batch_size);
        txs.push_back(worker.prepare_update(k, batch, global));
      }
      return txs;
    };
    const auto prove_start = Clock::now();
    std::vector<std::vector<ledger::Transaction>> pending;
    if (workers.size() == 1) {
      pending.push_back(prove_worker(*workers[0]));
    } else {
      std::vector<std::future<std::vector<ledger::Transaction>>> futures;
      for (auto& worker : workers) futures.push_back(std::async(std::launch::async, prove_worker, std::ref(*worker)));
      for (auto& f : futures) pending.push_back(f.get());
    }
    m.prove_seconds = seconds_since(prove_start);

    const auto verify_start = Clock::now();
    for (const auto& txs : pending) {
      for (const auto& t : txs) {
        if (expect_accepted(chain.submit(t))) {
          ++m.updates_accepted;
        } else {
          ++m.updates_rejected;
        }
      }
    }
    m.verify_seconds = seconds_since(verify_start);

    do {
      chain.submit(tx("initiator", ledger::AdvanceBlock{}));
    } while (chain.get_block_height() % cfg.cycle_length_blocks != 0);

    const ModelParams latest = chain.get_latest_model();
    std::tie(m.accuracy, m.test_loss) = evaluate(latest, data.test);
    m.model_version = latest.version;
    m.state_digest = hex(chain.state_digest());
    report.prove_seconds += m.prove_seconds;
    report.verify_seconds += m.verify_seconds;
    report.cycles.push_back(m);
    if (on_cycle) on_cycle(m);
  }

  chain.set_observer({});
  report.final_model = chain.get_latest_model();
  report.final_digest = hex(chain.state_digest());
  report.total_seconds = seconds_since(run_start);

  if (log) {
    log->flush();
    std::ofstream metrics(cfg.output_dir + "/metrics.jsonl", std::ios::trunc);
    for (const json& line : report.to_json_lines()) metrics << line.dump() << '\n';
    std::ofstream model(cfg.output_dir + "/model_final.json", std::ios::trunc);
    model << report.final_model.to_json().dump() << '\n';
  }
  return report;
}

ReplayResult replay_log(const std::string& path) {
  const ledger::TxLog log = ledger::read_tx_log(path);
  json header;
  try {
    header = json::parse(log.header.begin(), log.header.end());
    if (header.at("format") != "vfl-txlog" || header.at("version") != 1) {
      throw Error(ErrorCode::kMalformedData, "not a transaction log");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedData, std::string("log header: ") + e.what());
  }
  const Fixed lr = Fixed::checked(header.at("learning_rate_raw").get<std::int64_t>());
  Deployment dep = deploy(header.at("batch_size").get<std::size_t>(), lr);
  ledger::Ledger chain(dep.backend, ModelParams::from_json(header.at("genesis")),
                       header.at("cycle_length_blocks").get<std::uint64_t>());
  ReplayResult result;
  for (const ledger::Transaction& t : log.transactions) {
    const ledger::Receipt r = chain.submit(t);
    ++result.transactions;
    if (r.accepted) {
      ++result.accepted;
    } else {
      ++result.rejected;
    }
  }
  result.final_digest = hex(chain.state_digest());
  return result;
}

bool AttackReport::all_passed() const {
  if (!control_accepted || !aggregation_audit || attacks.empty()) return false;
  for (const AttackOutcome& a : attacks) {
    if (!a.rejected) return false;
  }
  return true;
}

json AttackReport::to_json() const {
  json rows = json::array();
  for (const AttackOutcome& a : attacks) {
    rows.push_back(json{{"attack", a.name}, {"objective", a.objective}, {"observed", a.observed}, {"rejected", a.rejected}});
  }
  return json{{"control_accepted", control_accepted},
              {"aggregation_audit", aggregation_audit},
              {"attacks", rows},
              {"all_passed", all_passed()}};
}

AttackReport run_attack_suite(std::uint64_t seed, std::size_t batch_size) {
  AttackReport report;
  Deployment dep = deploy(batch_size, encode_fixed(kDefaultLearningRate));
  ledger::Ledger chain(dep.backend, ModelParams{}, 10);

  std::mt19937_64 rng(seed);
  auto records = std::make_shared<std::vector<DataRecord>>(synthetic_blobs(20, seed));
  actors::CertificateAuthority ca(vfl::KeyPair::generate(rng));
  actors::CertificateAuthority rogue(vfl::KeyPair::generate(rng));
  chain.submit(tx("initiator", ledger::AnchorRootKey{ledger::RootPublicKey{ca.root_public_key()}}));
  chain.submit(tx("initiator", ledger::RegisterVk{dep.registration_vk}));
  chain.submit(tx("initiator", ledger::RegisterVk{dep.learning_vk}));

  actors::Worker worker("worker-0", dep.backend, chain, rng());
  worker.add_artifacts(dep.registration);
  worker.add_artifacts(dep.learning);
  auto make_device = [&](actors::CertificateAuthority& issuer, std::size_t offset) {
    const vfl::KeyPair keys = vfl::KeyPair::generate(rng);
    const Signature cert = issuer.issue(keys.public_key);
    return worker.add_device(actors::Device(keys, cert, actors::DataSource(records, true, offset)));
  };
  const std::size_t dev_a = make_device(ca, 0);
  const std::size_t dev_c = make_device(ca, 40);
  const std::size_t dev_unregistered = make_device(ca, 80);
  const std::size_t dev_rogue = make_device(rogue, 60);

  auto add = [&report](std::string name, std::string objective, std::string observed, bool rejected) {
    report.attacks.push_back(AttackOutcome{std::move(name), std::move(objective), std::move(observed), rejected});
  };
  auto proving_fails = [](const std::function<void()>& f) -> std::optional<std::string> {
    try {
      f();
    } catch (const UnsatisfiableInputs& e) {
      return std::string(e.what());
    }
    return std::nullopt;
  };

  // Honest control: two devices register and submit in the same cycle.
  const ModelParams g0 = chain.get_latest_model();
  bool control = worker.register_device(dev_a).accepted && worker.register_device(dev_c).accepted;
  const ledger::Transaction honest_a = worker.prepare_update(dev_a, worker.device(dev_a).emit_batch(batch_size), g0);
  const ledger::Transaction honest_c = worker.prepare_update(dev_c, worker.device(dev_c).emit_batch(batch_size), g0);
  control = chain.submit(honest_a).accepted && control;
  control = chain.submit(honest_c).accepted && control;
  report.control_accepted = control;

  // Counter replay of an accepted update.
  {
    const ledger::Receipt r = chain.submit(honest_a);
    add("counter replay", "Obj1", rejection_name(r), r.reason == ledger::Rejection::kReplayedCounter);
  }

  // Aggregation audit: the new global model is the floor-average of exactly
  // the accepted local models, recomputed here independently.
  {
    while (chain.get_block_height() % 10 != 9) chain.submit(tx("initiator", ledger::AdvanceBlock{}));
    const ledger::Receipt r = chain.submit(tx("initiator", ledger::AdvanceBlock{}));
    const auto& lm_a = std::get<ledger::SubmitUpdate>(honest_a.payload).local_model;
    const auto& lm_c = std::get<ledger::SubmitUpdate>(honest_c.payload).local_model;
    ModelParams expected;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      for (std::size_t j = 0; j < kNumFeatures; ++j) {
        expected.weights[c][j] = Fixed{floor_div(lm_a.weights[c][j].raw + lm_c.weights[c][j].raw, 2)};
      }
      expected.biases[c] = Fixed{floor_div(lm_a.biases[c].raw + lm_c.biases[c].raw, 2)};
    }
    expected.version = g0.version + 1;
    report.aggregation_audit = r.cycle.has_value() && r.cycle->updates_aggregated == 2 &&
                               chain.get_latest_model() == expected;
  }
  const ModelParams g1 = chain.get_latest_model();

  // Rogue CA: a certificate from an unanchored root cannot be proven against
  // the anchored key, and a proof against the rogue key fails on the ledger.
  {
    const auto anchored = ca.root_public_key();
    const auto failure = proving_fails([&] { worker.prepare_registration(dev_rogue, anchored); });
    ledger::Transaction t = worker.prepare_registration(dev_rogue, rogue.root_public_key());
    std::get<ledger::RegisterDevice>(t.payload).root_key = ledger::RootPublicKey{anchored};
    const ledger::Receipt r = chain.submit(t);
    add("rogue CA certificate", "Obj3",
        (failure ? *failure : std::string("proved")) + "; ledger " + rejection_name(r),
        failure.has_value() && !r.accepted);
  }

  // Poisoned LM: outputs rewritten in both the proof and the transaction.
  {
    ledger::Transaction t = worker.prepare_update(dev_a, worker.device(dev_a).emit_batch(batch_size), g1);
    auto& p = std::get<ledger::SubmitUpdate>(t.payload);
    p.local_model.weights[0][0] = Fixed{p.local_model.weights[0][0].raw + kFixedOne};
    p.proof.public_outputs = circuits::learning_public_outputs({p.counter, p.local_model});
    const ledger::Receipt r = chain.submit(t);
    add("poisoned LM output", "Obj2", rejection_name(r), r.reason == ledger::Rejection::kProofInvalid);
  }

  // Forged batch signature: the batch is signed by a key other than the device's.
  {
    LearningBatch batch = worker.device(dev_c).emit_batch(batch_size);
    const vfl::KeyPair forger = vfl::KeyPair::generate(rng);
    batch.signature = eddsa_sign(forger.secret, batch_message(batch.commitment.root, batch.counter));
    const auto failure = proving_fails([&] { worker.prepare_update(dev_c, batch, g1); });
    add("forged batch signature", "Obj3", failure.value_or("proved"), failure.has_value());
  }

  // Post-signing tamper: one feature changed after the device signed.
  {
    LearningBatch batch = worker.device(dev_c).emit_batch(batch_size);
    batch.records[0].features[0] = Fixed{batch.records[0].features[0].raw ^ 1};
    const auto failure = proving_fails([&] { worker.prepare_update(dev_c, batch, g1); });
    add("post-signing data tamper", "Obj3", failure.value_or("proved"), failure.has_value());
  }

  // Unregistered handle: a genuine device that never registered.
  {
    const ledger::Transaction t =
        worker.prepare_update(dev_unregistered, worker.device(dev_unregistered).emit_batch(batch_size), g1);
    const ledger::Receipt r = chain.submit(t);
    add("unregistered handle", "Obj3", rejection_name(r), r.reason == ledger::Rejection::kUnknownHandle);
  }
  return report;
}

}  // namespace vfl::harness
