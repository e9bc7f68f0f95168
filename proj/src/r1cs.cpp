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

#include "vfl/r1cs.hpp"

#include <unordered_map>

#include "vfl/error.hpp"

namespace vfl::r1cs {

namespace {

constexpr char kMagic[4] = {'V', 'F', 'L', 'C'};
constexpr std::uint16_t kFormatVersion = 1;
constexpr std::size_t kChunk = 1 << 20;

class ChunkedWriter {
 public:
  explicit ChunkedWriter(const std::function<void(std::span<const std::uint8_t>)>& sink) : sink_(sink) {}
  ~ChunkedWriter() { flush(); }

  ByteWriter& w() {
    if (w_.buffer().size() >= kChunk) flush();
    return w_;
  }

  void flush() {
    if (!w_.buffer().empty()) {
      sink_(w_.buffer());
      w_.buffer().clear();
    }
  }

 private:
  const std::function<void(std::span<const std::uint8_t>)>& sink_;
  ByteWriter w_;
};

void write_lc(ByteWriter& w, const ConstraintSystem& cs, LcSpan lc) {
  w.u32(static_cast<std::uint32_t>(lc.size()));
  for (std::uint32_t i = lc.begin; i < lc.end; ++i) {
    w.u32(cs.terms[i].var);
    w.field(cs.coefficients[cs.terms[i].coeff]);
  }
}

class LcReader {
 public:
  explicit LcReader(ConstraintSystem& cs) : cs_(cs) {
    for (std::uint32_t i = 0; i < cs.coefficients.size(); ++i) index_.emplace(cs.coefficients[i], i);
  }

  LcSpan read(ByteReader& r, std::size_t num_vars) {
    const std::uint32_t n = r.u32();
    if (std::size_t{n} * 36 > r.remaining()) throw Error(ErrorCode::kMalformedData, "truncated LC");
    LcSpan span{static_cast<std::uint32_t>(cs_.terms.size()), 0};
    for (std::uint32_t i = 0; i < n; ++i) {
      const Var v = r.u32();
      if (v >= num_vars) throw Error(ErrorCode::kMalformedData, "variable index out of range");
      const Fr coeff = r.field();
      auto [it, inserted] = index_.emplace(coeff, static_cast<std::uint32_t>(cs_.coefficients.size()));
      if (inserted) cs_.coefficients.push_back(coeff);
      cs_.terms.push_back(PackedTerm{v, it->second});
    }
    span.end = static_cast<std::uint32_t>(cs_.terms.size());
    return span;
  }

 private:
  ConstraintSystem& cs_;
  std::unordered_map<Fr, std::uint32_t> index_;
};

}  // namespace

void ConstraintSystem::serialize(const std::function<void(std::span<const std::uint8_t>)>& sink) const {
  ChunkedWriter out(sink);
  ByteWriter& h = out.w();
  h.bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
  h.u16(kFormatVersion);
  h.str(label);
  h.u32(num_public_inputs);
  h.u32(num_public_outputs);
  h.u32(num_private_inputs);
  h.u32(num_aux);
  h.u64(constraints.size());
  for (const Constraint& c : constraints) {
    ByteWriter& w = out.w();
    write_lc(w, *this, c.a);
    write_lc(w, *this, c.b);
    write_lc(w, *this, c.c);
  }
  out.w().u64(hints.size());
  for (const Hint& hint : hints) {
    ByteWriter& w = out.w();
    w.u8(static_cast<std::uint8_t>(hint.kind));
    w.u32(hint.target);
    w.u32(hint.count);
    w.u64(hint.param);
    write_lc(w, *this, hint.in0);
    write_lc(w, *this, hint.in1);
  }
}

std::vector<std::uint8_t> ConstraintSystem::serialize() const {
  std::vector<std::uint8_t> out;
  serialize([&](std::span<const std::uint8_t> chunk) { out.insert(out.end(), chunk.begin(), chunk.end()); });
  return out;
}

ConstraintSystem ConstraintSystem::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw Error(ErrorCode::kMalformedData, "not a circuit file");
  if (r.u16() != kFormatVersion) throw Error(ErrorCode::kMalformedData, "unsupported circuit format version");
  ConstraintSystem cs;
  cs.label = r.str();
  cs.num_public_inputs = r.u32();
  cs.num_public_outputs = r.u32();
  cs.num_private_inputs = r.u32();
  cs.num_aux = r.u32();
  const std::size_t nvars = cs.num_variables();
  LcReader lcs(cs);
  const std::uint64_t nconstraints = r.u64();
  if (nconstraints > r.remaining() / 12) throw Error(ErrorCode::kMalformedData, "constraint count");
  cs.constraints.reserve(nconstraints);
  for (std::uint64_t i = 0; i < nconstraints; ++i) {
    Constraint c;
    c.a = lcs.read(r, nvars);
    c.b = lcs.read(r, nvars);
    c.c = lcs.read(r, nvars);
    cs.constraints.push_back(c);
  }
  const std::uint64_t nhints = r.u64();
  if (nhints > r.remaining() / 25) throw Error(ErrorCode::kMalformedData, "hint count");
  cs.hints.reserve(nhints);
  for (std::uint64_t i = 0; i < nhints; ++i) {
    Hint h;
    const std::uint8_t kind = r.u8();
    if (kind < 1 || kind > 6) throw Error(ErrorCode::kMalformedData, "unknown hint kind");
    h.kind = static_cast<HintKind>(kind);
    h.target = r.u32();
    h.count = r.u32();
    h.param = r.u64();
    if (std::size_t{h.target} + h.count > nvars || h.target == kOne) {
      throw Error(ErrorCode::kMalformedData, "hint target out of range");
    }
    h.in0 = lcs.read(r, nvars);
    h.in1 = lcs.read(r, nvars);
    cs.hints.push_back(h);
  }
  if (!r.done()) throw Error(ErrorCode::kMalformedData, "trailing bytes after circuit");
  return cs;
}

Digest ConstraintSystem::digest() const {
  Sha256 sha;
  serialize([&](std::span<const std::uint8_t> chunk) { sha.update(chunk); });
  return sha.finish();
}

std::optional<std::size_t> first_violation(const ConstraintSystem& cs, std::span<const Fr> z) {
  if (z.size() != cs.num_variables()) throw Error(ErrorCode::kLengthMismatch, "assignment length");
  if (!z.empty() && !z[0].is_one()) return std::size_t{0};
  for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
    if (!cs.holds(i, z)) return i;
  }
  return std::nullopt;
}

bool check_satisfaction(const ConstraintSystem& cs, const Witness& w) {
  return !first_violation(cs, w.assignment).has_value();
}

void solve(const ConstraintSystem& cs, std::vector<Fr>& z, bool keep_public) {
  const Var public_end = 1 + cs.num_public();
  for (const Hint& h : cs.hints) {
    if (keep_public && h.target < public_end) continue;
    switch (h.kind) {
      case HintKind::kLinear:
        z[h.target] = cs.evaluate(h.in0, z);
        break;
      case HintKind::kProduct:
        z[h.target] = cs.evaluate(h.in0, z) * cs.evaluate(h.in1, z);
        break;
      case HintKind::kQuotient: {
        const Fr den = cs.evaluate(h.in1, z);
        z[h.target] = den.is_zero() ? Fr::zero() : cs.evaluate(h.in0, z) * den.inverse();
        break;
      }
      case HintKind::kBits: {
        const U256 v = cs.evaluate(h.in0, z).to_u256();
        for (std::uint32_t i = 0; i < h.count; ++i) {
          z[h.target + i] = (i < 256 && v.bit(i)) ? Fr::one() : Fr::zero();
        }
        break;
      }
      case HintKind::kDivMod: {
        __int128 n = 0;
        const auto d = static_cast<__int128>(h.param);
        if (d > 0 && to_signed(cs.evaluate(h.in0, z), n)) {
          __int128 q = n / d;
          if (n % d != 0 && n < 0) --q;
          z[h.target] = from_signed(q);
          z[h.target + 1] = from_signed(n - q * d);
        } else {
          z[h.target] = Fr::zero();
          z[h.target + 1] = Fr::zero();
        }
        break;
      }
      case HintKind::kIndicator:
        z[h.target] = cs.evaluate(h.in0, z) == Fr::from_u64(h.param) ? Fr::one() : Fr::zero();
        break;
    }
  }
}

Witness synthesize_witness(const ConstraintSystem& cs, std::span<const Fr> public_inputs,
                           std::span<const Fr> private_inputs) {
  if (public_inputs.size() != cs.num_public_inputs || private_inputs.size() != cs.num_private_inputs) {
    throw Error(ErrorCode::kArityMismatch,
                cs.label + " expects " + std::to_string(cs.num_public_inputs) + " public and " +
                    std::to_string(cs.num_private_inputs) + " private inputs");
  }
  Witness w;
  w.assignment.assign(cs.num_variables(), Fr::zero());
  w.assignment[0] = Fr::one();
  std::copy(public_inputs.begin(), public_inputs.end(), w.assignment.begin() + 1);
  std::copy(private_inputs.begin(), private_inputs.end(), w.assignment.begin() + cs.first_private_input());
  solve(cs, w.assignment, false);
  if (auto bad = first_violation(cs, w.assignment)) throw UnsatisfiableInputs(*bad, cs.label);
  return w;
}

std::vector<Fr> public_values(const ConstraintSystem& cs, const Witness& w) {
  return {w.assignment.begin() + 1, w.assignment.begin() + 1 + cs.num_public()};
}

std::vector<Fr> public_outputs(const ConstraintSystem& cs, const Witness& w) {
  return {w.assignment.begin() + cs.first_public_output(), w.assignment.begin() + 1 + cs.num_public()};
}

std::vector<Fr> private_inputs(const ConstraintSystem& cs, const Witness& w) {
  const auto first = w.assignment.begin() + cs.first_private_input();
  return {first, first + cs.num_private_inputs};
}

}  // namespace vfl::r1cs
