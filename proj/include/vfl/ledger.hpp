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
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include "vfl/babyjubjub.hpp"
#include "vfl/commitments.hpp"
#include "vfl/learner.hpp"
#include "vfl/proof_system.hpp"

namespace vfl::ledger {

/// Label under which the registration verification key is looked up.
inline constexpr std::string_view kRegistrationVkLabel = "registration";

/// Root public key of the certificate authority as anchored on the ledger.
struct RootPublicKey {
  babyjubjub::CurvePoint point;

  friend bool operator==(const RootPublicKey&, const RootPublicKey&) = default;
};

struct AnchorRootKey {
  RootPublicKey root_key;

  auto fields() const { return std::tie(root_key); }
};

struct RegisterVk {
  proof::VerificationKey vk;

  auto fields() const { return std::tie(vk); }
};

struct RegisterDevice {
  proof::Proof proof;
  DeviceHandle handle;
  RootPublicKey root_key;

  auto fields() const { return std::tie(proof, handle, root_key); }
};

struct SubmitUpdate {
  std::string vk_label;
  proof::Proof proof;
  DeviceHandle handle;
  ModelParams global_model;
  ModelParams local_model;
  std::uint64_t counter = 0;

  auto fields() const { return std::tie(vk_label, proof, handle, global_model, local_model, counter); }
};

struct AdvanceBlock {
  auto fields() const { return std::tie(); }
};

using Payload = std::variant<AnchorRootKey, RegisterVk, RegisterDevice, SubmitUpdate, AdvanceBlock>;

namespace detail {

template <class T, class... Allowed>
inline constexpr bool kOneOf = (std::is_same_v<T, Allowed> || ...);

// Field types a transaction may carry; device keys, salts, signatures and
// records are all distinct types that are absent from this list.
template <class T>
inline constexpr bool kPublicField = kOneOf<std::remove_cvref_t<T>, proof::Proof, proof::VerificationKey,
                                            DeviceHandle, ModelParams, RootPublicKey, std::uint64_t, std::string>;

template <class Tuple>
struct AllPublic;

template <class... Ts>
struct AllPublic<std::tuple<Ts...>> : std::bool_constant<(kPublicField<Ts> && ...)> {};

template <class P>
inline constexpr bool kPublicPayload = AllPublic<decltype(std::declval<const P&>().fields())>::value;

}  // namespace detail

static_assert(detail::kPublicPayload<AnchorRootKey> && detail::kPublicPayload<RegisterVk> &&
                  detail::kPublicPayload<RegisterDevice> && detail::kPublicPayload<SubmitUpdate> &&
                  detail::kPublicPayload<AdvanceBlock>,
              "transaction payloads may only carry public protocol values");

struct Transaction {
  std::string sender;
  Payload payload;

  std::string_view kind() const;
  std::vector<std::uint8_t> serialize() const;
  /// Throws Error(kMalformedData).
  static Transaction deserialize(std::span<const std::uint8_t> bytes);
};

enum class Rejection {
  kAlreadyAnchored,
  kNoRootAnchored,
  kNoVerificationKey,
  kVkAlreadyRegistered,
  kProofInvalid,
  kRootKeyMismatch,
  kDuplicateHandle,
  kUnknownHandle,
  kStaleGlobalModel,
  kReplayedCounter,
};

std::string_view to_string(Rejection r);

struct CycleReport {
  std::uint64_t cycle_index = 0;
  std::uint64_t updates_aggregated = 0;
  std::uint64_t model_version = 0;
  Fr state_digest;
};

struct Receipt {
  bool accepted = false;
  std::optional<Rejection> reason;
  std::size_t constraints_checked = 0;
  std::optional<CycleReport> cycle;
};

struct HandleEntry {
  std::uint64_t registered_at = 0;
  std::uint64_t last_counter = 0;

  friend bool operator==(const HandleEntry&, const HandleEntry&) = default;
};

struct LedgerState {
  std::uint64_t block_height = 0;
  // registration contract
  std::optional<RootPublicKey> anchored_root_key;
  std::map<DeviceHandle, HandleEntry> handles;
  // verifier contract
  std::map<std::string, proof::VerificationKey> vk_by_label;
  // aggregation contract
  ModelParams latest;
  std::array<std::int64_t, ModelParams::kNumParams> pending_sum{};
  std::uint64_t pending_count = 0;
  std::uint64_t cycle_length_blocks = 10;
  std::uint64_t cycle_index = 0;

  /// Canonical field-element serialization.
  std::vector<Fr> to_fields() const;
  /// Poseidon chain over to_fields().
  Fr digest() const;
};

/// The three contracts behind one sequential state machine. submit() may be
/// called from several threads; transactions apply in arrival order.
class Ledger {
 public:
  /// Throws Error(kConfig) for a zero cycle length.
  Ledger(std::shared_ptr<const proof::ProofBackend> backend, ModelParams genesis,
         std::uint64_t cycle_length_blocks = 10);

  Receipt submit(const Transaction& tx);

  /// Called with every applied transaction (accepted or not), in order.
  void set_observer(std::function<void(const Transaction&, const Receipt&)> observer);

  ModelParams get_latest_model() const;
  std::optional<HandleEntry> get_handle(const DeviceHandle& handle) const;
  std::uint64_t get_block_height() const;
  LedgerState snapshot() const;
  Fr state_digest() const;

 private:
  Receipt apply(const AnchorRootKey& tx);
  Receipt apply(const RegisterVk& tx);
  Receipt apply(const RegisterDevice& tx);
  Receipt apply(const SubmitUpdate& tx);
  Receipt apply(const AdvanceBlock& tx);

  std::shared_ptr<const proof::ProofBackend> backend_;
  mutable std::mutex mu_;
  LedgerState state_;
  std::function<void(const Transaction&, const Receipt&)> observer_;
};

/// Length-prefixed binary log: a header record followed by one record per
/// transaction.
class TxLogWriter {
 public:
  /// Throws Error(kConfig) if the file cannot be created.
  TxLogWriter(const std::string& path, std::span<const std::uint8_t> header);
  void append(const Transaction& tx);
  void flush();

 private:
  void record(std::span<const std::uint8_t> bytes);
  std::ofstream out_;
};

struct TxLog {
  std::vector<std::uint8_t> header;
  std::vector<Transaction> transactions;
};

/// Throws Error(kMalformedData) for unreadable or malformed logs.
TxLog read_tx_log(const std::string& path);

}  // namespace vfl::ledger
