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

// Command-line front end: run experiments, the attack suite, log replay and
// circuit dumps.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vfl/circuits.hpp"
#include "vfl/error.hpp"
#include "vfl/harness.hpp"
#include "vfl/poseidon.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

using nlohmann::json;

int cmd_run(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config " << config_path << "\n";
    return kExitConfig;
  }
  vfl::harness::ExperimentConfig cfg;
  try {
    cfg = vfl::harness::ExperimentConfig::from_json(json::parse(in));
  } catch (const json::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  }
  const auto report = vfl::harness::run_experiment(cfg, [](const vfl::harness::CycleMetrics& m) {
    std::cerr << "cycle " << m.cycle << " accuracy " << m.accuracy << " version " << m.model_version << "\n";
  });
  std::cout << report.to_json_lines().back().dump(2) << "\n";
  return report.unexpected_rejections == 0 ? kExitOk : kExitViolation;
}

int cmd_attack_suite(std::uint64_t seed, std::size_t batch_size) {
  const auto report = vfl::harness::run_attack_suite(seed, batch_size);
  std::cout << report.to_json().dump(2) << "\n";
  return report.all_passed() ? kExitOk : kExitViolation;
}

int cmd_replay(const std::string& log_path) {
  const auto result = vfl::harness::replay_log(log_path);
  std::cout << json{{"transactions", result.transactions},
                    {"accepted", result.accepted},
                    {"rejected", result.rejected},
                    {"final_digest", result.final_digest}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

int cmd_dump_circuit(const std::string& label, const std::string& out, double learning_rate) {
  vfl::r1cs::ConstraintSystem cs;
  if (label == vfl::circuits::kRegistrationLabel) {
    cs = vfl::circuits::build_registration_circuit();
  } else if (label.rfind("learning/b", 0) == 0) {
    std::size_t batch = 0;
    try {
      batch = std::stoul(label.substr(10));
    } catch (const std::exception&) {
      batch = 0;
    }
    if (batch == 0) {
      std::cerr << "bad learning label " << label << "\n";
      return kExitConfig;
    }
    cs = vfl::circuits::build_learning_circuit(batch, vfl::encode_fixed(learning_rate));
  } else {
    std::cerr << "unknown circuit label " << label << " (registration | learning/b<N>)\n";
    return kExitConfig;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) {
    std::cerr << "cannot write " << out << "\n";
    return kExitConfig;
  }
  cs.serialize([&file](std::span<const std::uint8_t> chunk) {
    file.write(reinterpret_cast<const char*>(chunk.data()), static_cast<std::streamsize>(chunk.size()));
  });
  file.close();
  std::cout << json{{"label", cs.label},
                    {"constraints", cs.num_constraints()},
                    {"public", cs.num_public()},
                    {"private", cs.num_private()},
                    {"digest", vfl::to_hex(cs.digest())}}
                   .dump(2)
            << "\n";
  return kExitOk;
}

void dump_poseidon_params() {
  const vfl::PoseidonParams& p = vfl::poseidon_params();
  json rc = json::array();
  for (const vfl::Fr& c : p.round_constants) rc.push_back(c.to_hex());
  json mds = json::array();
  for (const auto& row : p.mds) {
    json r = json::array();
    for (const vfl::Fr& m : row) r.push_back(m.to_hex());
    mds.push_back(r);
  }
  std::cout << json{{"t", p.t},
                    {"alpha", p.alpha},
                    {"full_rounds", p.full_rounds},
                    {"partial_rounds", p.partial_rounds},
                    {"round_constants", rc},
                    {"mds", mds}}
                   .dump(2)
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verifiable federated learning simulator"};
  app.require_subcommand(0, 1);

  bool poseidon_params = false;
  app.add_flag("--dump-poseidon-params", poseidon_params, "Print the Poseidon constants as JSON");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("--config", config_path, "Experiment config file")->required();

  std::uint64_t seed = 7;
  std::size_t attack_batch = 10;
  auto* attack = app.add_subcommand("attack-suite", "Run the adversarial fixtures");
  attack->add_option("--seed", seed, "RNG seed");
  attack->add_option("--batch-size", attack_batch, "Learning batch size")->check(CLI::PositiveNumber);

  std::string log_path;
  auto* replay = app.add_subcommand("replay", "Replay a transaction log and print the final state digest");
  replay->add_option("--log", log_path, "Transaction log file")->required();

  std::string label;
  std::string out;
  double learning_rate = vfl::kDefaultLearningRate;
  auto* dump = app.add_subcommand("dump-circuit", "Serialize a circuit to a file");
  dump->add_option("--label", label, "registration | learning/b<N>")->required();
  dump->add_option("--out", out, "Output file")->required();
  dump->add_option("--learning-rate", learning_rate, "Learning rate baked into learning circuits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (poseidon_params) {
      dump_poseidon_params();
      if (app.get_subcommands().empty()) return kExitOk;
    }
    if (run->parsed()) return cmd_run(config_path);
    if (attack->parsed()) return cmd_attack_suite(seed, attack_batch);
    if (replay->parsed()) return cmd_replay(log_path);
    if (dump->parsed()) return cmd_dump_circuit(label, out, learning_rate);
    if (!poseidon_params) std::cout << app.help();
    return kExitOk;
  } catch (const vfl::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == vfl::ErrorCode::kConfig ? kExitConfig : kExitViolation;
  }
}
