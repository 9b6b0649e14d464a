// Copyright 2026 The Notary Trie Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "notary/merkle_ledger.hpp"
#include "notary/store.hpp"
#include "notary/trie.hpp"

namespace notary {

enum class AuditStatus { kPass, kFail, kInconclusive, kNotChecked };

std::string_view audit_status_name(AuditStatus status);

struct PropertyOutcome {
  AuditStatus status = AuditStatus::kPass;
  std::optional<std::uint64_t> round;  // first offending round, if any
  std::string detail;
};

struct AuditReport {
  // A single value (digest or null) per round: every hash reference on
  // each round's search path checks out.
  PropertyOutcome no_alternative_histories;
  // Once present, the id stays present.
  PropertyOutcome no_removal;
  // Every value change is backed by a valid consistency proof.
  PropertyOutcome no_forks;
  // The chain of root versions equals the published digest list.
  PropertyOutcome chain_match;
  // The shared digest is one of the notarized values, or bridged to them.
  PropertyOutcome disclosed_data_match{AuditStatus::kNotChecked, {}, {}};
  // Audit proofs only: the bundle carries exactly the data the audit used.
  PropertyOutcome bundle{AuditStatus::kNotChecked, {}, {}};

  // Oldest first; nullopt where the id is absent from that round's trie.
  std::vector<std::optional<Digest>> history;
  std::uint64_t covered_rounds = 0;
  std::uint64_t chain_height = 0;
  // Set when chain_roots extends past what an audit proof covers.
  std::optional<std::uint64_t> not_covered_from;
  bool id_known = false;
  std::string message;

  AuditStatus verdict() const;
  // 0 pass, 1 fail, 2 inconclusive.
  int exit_code() const;
  std::string to_text() const;
};

// What the auditor was shown: a digest of the shared ledger, plus optional
// consistency proofs placing it between two notarized values.
struct AuditClaim {
  Digest digest;
  std::optional<ConsistencyProof> from_previous;
  std::optional<ConsistencyProof> to_next;
};

AuditReport audit_ledger(const TrieParams& params, ByteView id,
                         const std::optional<AuditClaim>& claim,
                         std::span<const Digest> chain_roots,
                         const ObjectStore& storage);

// Offline audit bundle. Wire format, all integers little-endian:
//   "NTAP"
//   u32 len | header: u8 hash alg, u16 r, u64 up_to_round, id key
//   u32 len | nodes:  repeated (u32 len | serialized node)
//   u32 len | proofs: repeated (u64 round | u32 len | serialized proof)
struct AuditProof {
  HashAlg alg = HashAlg::kSha256;
  unsigned arity = 4;
  Digest id_key;
  std::uint64_t up_to_round = 0;
  std::vector<Bytes> nodes;
  std::vector<std::pair<std::uint64_t, Bytes>> proofs;

  Bytes serialize() const;
  static AuditProof parse(ByteView bytes);  // kParse on malformed input
};

// Throws kInvalidRange if up_to_round >= chain height, kCannotConstruct if
// storage lacks (or has corrupted) data the audit needs.
AuditProof make_audit_proof(const TrieParams& params, ByteView id,
                            std::uint64_t up_to_round,
                            std::span<const Digest> chain_roots,
                            const ObjectStore& storage);

// Same checks as audit_ledger on rounds <= proof.up_to_round, using only
// the bundle. Later rounds are reported via not_covered_from.
AuditReport verify_audit_proof(const AuditProof& proof, ByteView id,
                               std::span<const Digest> chain_roots,
                               const std::optional<AuditClaim>& claim = std::nullopt);
// Parses first; a bundle that does not parse is inconclusive.
AuditReport verify_audit_proof_bytes(ByteView bundle, ByteView id,
                                     std::span<const Digest> chain_roots,
                                     const std::optional<AuditClaim>& claim = std::nullopt);

}  // namespace notary
