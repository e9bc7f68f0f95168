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

#include "vfl/ledger.hpp"

#include "vfl/binary_io.hpp"
#include "vfl/error.hpp"
#include "vfl/poseidon.hpp"

namespace vfl::ledger {

namespace {

enum class Kind : std::uint8_t {
  kAnchorRootKey = 1,
  kRegisterVk = 2,
  kRegisterDevice = 3,
  kSubmitUpdate = 4,
  kAdvanceBlock = 5,
};

void write_point(ByteWriter& w, const babyjubjub::CurvePoint& p) {
  w.field(p.x);
  w.field(p.y);
}

babyjubjub::CurvePoint read_point(ByteReader& r) {
  babyjubjub::CurvePoint p;
  p.x = r.field();
  p.y = r.field();
  return p;
}

void write_blob(ByteWriter& w, std::span<const std::uint8_t> b) {
  w.u32(static_cast<std::uint32_t>(b.size()));
  w.bytes(b);
}

std::span<const std::uint8_t> read_blob(ByteReader& r) { return r.bytes(r.u32()); }

void write_model(ByteWriter& w, const ModelParams& m) { w.fields(m.to_fields()); }

ModelParams read_model(ByteReader& r) {
  const std::vector<Fr> f = r.fields();
  try {
    return ModelParams::from_fields(f);
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedData, e.what());
  }
}

// Packs bytes into field elements, 31 bytes each, prefixed by the length.
void push_string(std::vector<Fr>& out, std::string_view s) {
  out.push_back(Fr::from_u64(s.size()));
  for (std::size_t i = 0; i < s.size(); i += 31) {
    U256 v;
    for (std::size_t j = i; j < std::min(s.size(), i + 31); ++j) {
      const std::size_t k = j - i;
      v.limbs[k / 8] |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(s[j])) << (8 * (k % 8));
    }
    out.push_back(Fr::from_u256(v));
  }
}

void push_bytes(std::vector<Fr>& out, std::span<const std::uint8_t> b) {
  push_string(out, std::string_view(reinterpret_cast<const char*>(b.data()), b.size()));
}

Receipt reject(Rejection r, std::size_t cost = 0) {
  Receipt receipt;
  receipt.reason = r;
  receipt.constraints_checked = cost;
  return receipt;
}

Receipt accept(std::size_t cost = 0) {
  Receipt receipt;
  receipt.accepted = true;
  receipt.constraints_checked = cost;
  return receipt;
}

}  // namespace

std::string_view to_string(Rejection r) {
  switch (r) {
    case Rejection::kAlreadyAnchored: return "AlreadyAnchored";
    case Rejection::kNoRootAnchored: return "NoRootAnchored";
    case Rejection::kNoVerificationKey: return "NoVerificationKey";
    case Rejection::kVkAlreadyRegistered: return "VkAlreadyRegistered";
    case Rejection::kProofInvalid: return "ProofInvalid";
    case Rejection::kRootKeyMismatch: return "RootKeyMismatch";
    case Rejection::kDuplicateHandle: return "DuplicateHandle";
    case Rejection::kUnknownHandle: return "UnknownHandle";
    case Rejection::kStaleGlobalModel: return "StaleGlobalModel";
    case Rejection::kReplayedCounter: return "ReplayedCounter";
  }
  return "Unknown";
}

std::string_view Transaction::kind() const {
  static constexpr std::string_view kNames[] = {"AnchorRootKey", "RegisterVk", "RegisterDevice", "SubmitUpdate",
                                                "AdvanceBlock"};
  return kNames[payload.index()];
}

std::vector<std::uint8_t> Transaction::serialize() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(payload.index() + 1));
  w.str(sender);
  std::visit(
      [&w](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnchorRootKey>) {
          write_point(w, p.root_key.point);
        } else if constexpr (std::is_same_v<T, RegisterVk>) {
          write_blob(w, p.vk.serialize());
        } else if constexpr (std::is_same_v<T, RegisterDevice>) {
          write_blob(w, p.proof.serialize());
          w.field(p.handle.value);
          write_point(w, p.root_key.point);
        } else if constexpr (std::is_same_v<T, SubmitUpdate>) {
          w.str(p.vk_label);
          write_blob(w, p.proof.serialize());
          w.field(p.handle.value);
          write_model(w, p.global_model);
          write_model(w, p.local_model);
          w.u64(p.counter);
        }
      },
      payload);
  return w.take();
}

Transaction Transaction::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const auto kind = static_cast<Kind>(r.u8());
  Transaction tx;
  tx.sender = r.str();
  switch (kind) {
    case Kind::kAnchorRootKey:
      tx.payload = AnchorRootKey{RootPublicKey{read_point(r)}};
      break;
    case Kind::kRegisterVk:
      tx.payload = RegisterVk{proof::VerificationKey::deserialize(read_blob(r))};
      break;
    case Kind::kRegisterDevice: {
      RegisterDevice p;
      p.proof = proof::Proof::deserialize(read_blob(r));
      p.handle = DeviceHandle{r.field()};
      p.root_key = RootPublicKey{read_point(r)};
      tx.payload = std::move(p);
      break;
    }
    case Kind::kSubmitUpdate: {
      SubmitUpdate p;
      p.vk_label = r.str();
      p.proof = proof::Proof::deserialize(read_blob(r));
      p.handle = DeviceHandle{r.field()};
      p.global_model = read_model(r);
      p.local_model = read_model(r);
      p.counter = r.u64();
      tx.payload = std::move(p);
      break;
    }
    case Kind::kAdvanceBlock:
      tx.payload = AdvanceBlock{};
      break;
    default:
      throw Error(ErrorCode::kMalformedData, "unknown transaction kind");
  }
  if (!r.done()) throw Error(ErrorCode::kMalformedData, "trailing bytes in transaction");
  return tx;
}

std::vector<Fr> LedgerState::to_fields() const {
  std::vector<Fr> out;
  out.push_back(Fr::from_u64(block_height));
  out.push_back(Fr::from_u64(anchored_root_key ? 1 : 0));
  if (anchored_root_key) {
    out.push_back(anchored_root_key->point.x);
    out.push_back(anchored_root_key->point.y);
  }
  out.push_back(Fr::from_u64(handles.size()));
  for (const auto& [handle, entry] : handles) {
    out.push_back(handle.value);
    out.push_back(Fr::from_u64(entry.registered_at));
    out.push_back(Fr::from_u64(entry.last_counter));
  }
  out.push_back(Fr::from_u64(vk_by_label.size()));
  for (const auto& [label, vk] : vk_by_label) {
    push_string(out, label);
    push_bytes(out, vk.serialize());
  }
  const std::vector<Fr> model = latest.to_fields();
  out.insert(out.end(), model.begin(), model.end());
  for (std::int64_t s : pending_sum) out.push_back(Fr::from_i64(s));
  out.push_back(Fr::from_u64(pending_count));
  out.push_back(Fr::from_u64(cycle_length_blocks));
  out.push_back(Fr::from_u64(cycle_index));
  return out;
}

Fr LedgerState::digest() const { return poseidon_hash(to_fields()); }

Ledger::Ledger(std::shared_ptr<const proof::ProofBackend> backend, ModelParams genesis,
               std::uint64_t cycle_length_blocks)
    : backend_(std::move(backend)) {
  if (cycle_length_blocks == 0) throw Error(ErrorCode::kConfig, "cycle_length_blocks must be >= 1");
  state_.latest = genesis;
  state_.cycle_length_blocks = cycle_length_blocks;
}

void Ledger::set_observer(std::function<void(const Transaction&, const Receipt&)> observer) {
  std::lock_guard lock(mu_);
  observer_ = std::move(observer);
}

Receipt Ledger::submit(const Transaction& tx) {
  std::lock_guard lock(mu_);
  const Receipt receipt = std::visit([this](const auto& p) { return apply(p); }, tx.payload);
  if (observer_) observer_(tx, receipt);
  return receipt;
}

Receipt Ledger::apply(const AnchorRootKey& tx) {
  if (state_.anchored_root_key) return reject(Rejection::kAlreadyAnchored);
  state_.anchored_root_key = tx.root_key;
  return accept();
}

Receipt Ledger::apply(const RegisterVk& tx) {
  if (state_.vk_by_label.contains(tx.vk.label)) return reject(Rejection::kVkAlreadyRegistered);
  state_.vk_by_label.emplace(tx.vk.label, tx.vk);
  return accept();
}

Receipt Ledger::apply(const RegisterDevice& tx) {
  if (!state_.anchored_root_key) return reject(Rejection::kNoRootAnchored);
  const auto vk = state_.vk_by_label.find(std::string(kRegistrationVkLabel));
  if (vk == state_.vk_by_label.end()) return reject(Rejection::kNoVerificationKey);

  const std::size_t cost = backend_->verification_cost(vk->second);
  const std::array<Fr, 2> publics{tx.root_key.point.x, tx.root_key.point.y};
  const bool outputs_match = tx.proof.public_outputs.size() == 1 && tx.proof.public_outputs[0] == tx.handle.value;
  if (!outputs_match || !backend_->verify(vk->second, tx.proof, publics)) {
    return reject(Rejection::kProofInvalid, cost);
  }
  if (!(tx.root_key == *state_.anchored_root_key)) return reject(Rejection::kRootKeyMismatch, cost);
  if (state_.handles.contains(tx.handle)) return reject(Rejection::kDuplicateHandle, cost);
  state_.handles.emplace(tx.handle, HandleEntry{state_.block_height, 0});
  return accept(cost);
}

Receipt Ledger::apply(const SubmitUpdate& tx) {
  const auto vk = state_.vk_by_label.find(tx.vk_label);
  if (vk == state_.vk_by_label.end() || tx.vk_label == kRegistrationVkLabel) {
    return reject(Rejection::kNoVerificationKey);
  }

  const std::size_t cost = backend_->verification_cost(vk->second);
  std::vector<Fr> publics{tx.handle.value};
  const std::vector<Fr> gm = tx.global_model.to_fields();
  publics.insert(publics.end(), gm.begin(), gm.end());
  std::vector<Fr> claimed_outputs{Fr::from_u64(tx.counter)};
  const std::vector<Fr> lm = tx.local_model.to_fields();
  claimed_outputs.insert(claimed_outputs.end(), lm.begin(), lm.end());
  if (tx.proof.public_outputs != claimed_outputs || !backend_->verify(vk->second, tx.proof, publics)) {
    return reject(Rejection::kProofInvalid, cost);
  }

  const auto entry = state_.handles.find(tx.handle);
  if (entry == state_.handles.end()) return reject(Rejection::kUnknownHandle, cost);
  if (!(tx.global_model == state_.latest)) return reject(Rejection::kStaleGlobalModel, cost);
  if (tx.counter != entry->second.last_counter + 1) return reject(Rejection::kReplayedCounter, cost);

  std::size_t k = 0;
  for (const auto& row : tx.local_model.weights) {
    for (Fixed w : row) state_.pending_sum[k++] += w.raw;
  }
  for (Fixed b : tx.local_model.biases) state_.pending_sum[k++] += b.raw;
  ++state_.pending_count;
  entry->second.last_counter = tx.counter;
  return accept(cost);
}

Receipt Ledger::apply(const AdvanceBlock&) {
  ++state_.block_height;
  Receipt receipt = accept();
  if (state_.block_height % state_.cycle_length_blocks != 0) return receipt;

  ++state_.cycle_index;
  const std::uint64_t count = state_.pending_count;
  if (count > 0) {
    const auto n = static_cast<std::int64_t>(count);
    std::size_t k = 0;
    for (auto& row : state_.latest.weights) {
      for (Fixed& w : row) w = Fixed{floor_div(state_.pending_sum[k++], n)};
    }
    for (Fixed& b : state_.latest.biases) b = Fixed{floor_div(state_.pending_sum[k++], n)};
    ++state_.latest.version;
    state_.pending_sum.fill(0);
    state_.pending_count = 0;
  }
  receipt.cycle = CycleReport{state_.cycle_index, count, state_.latest.version, state_.digest()};
  return receipt;
}

ModelParams Ledger::get_latest_model() const {
  std::lock_guard lock(mu_);
  return state_.latest;
}

std::optional<HandleEntry> Ledger::get_handle(const DeviceHandle& handle) const {
  std::lock_guard lock(mu_);
  const auto it = state_.handles.find(handle);
  if (it == state_.handles.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Ledger::get_block_height() const {
  std::lock_guard lock(mu_);
  return state_.block_height;
}

LedgerState Ledger::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

Fr Ledger::state_digest() const { return snapshot().digest(); }

TxLogWriter::TxLogWriter(const std::string& path, std::span<const std::uint8_t> header)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw Error(ErrorCode::kConfig, "cannot create transaction log " + path);
  record(header);
}

void TxLogWriter::record(std::span<const std::uint8_t> bytes) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(bytes.size()));
  out_.write(reinterpret_cast<const char*>(w.buffer().data()), static_cast<std::streamsize>(w.buffer().size()));
  out_.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void TxLogWriter::append(const Transaction& tx) { record(tx.serialize()); }

void TxLogWriter::flush() { out_.flush(); }

TxLog read_tx_log(const std::string& path) {
  const std::vector<std::uint8_t> data = read_file(path);
  ByteReader r(data);
  TxLog log;
  const auto header = read_blob(r);
  log.header.assign(header.begin(), header.end());
  while (!r.done()) log.transactions.push_back(Transaction::deserialize(read_blob(r)));
  return log;
}

}  // namespace vfl::ledger
