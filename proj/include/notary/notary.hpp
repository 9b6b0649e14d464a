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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "notary/chain.hpp"
#include "notary/merkle_ledger.hpp"
#include "notary/store.hpp"
#include "notary/trie.hpp"

namespace notary {

struct LedgerState {
  Bytes id;
  Digest digest;
  std::uint64_t size = 0;

  friend bool operator==(const LedgerState&, const LedgerState&) = default;
};

struct NotaryState {
  TrieParams params;
  // Every ledger ever notarized, keyed by hash(id), with its digest and
  // block count as of the previous round. Only grows.
  std::map<Digest, LedgerState> registry;
  Digest last_root;  // zero before the first round
  std::uint64_t round = 0;

  static NotaryState initial(const TrieParams& params);

  void save(const std::filesystem::path& file) const;
  static NotaryState load(const std::filesystem::path& file);

  friend bool operator==(const NotaryState&, const NotaryState&) = default;
};

struct RoundResult {
  NotaryState state;
  NotarizationRecord record;
  std::size_t proofs_stored = 0;
  std::size_t nodes_emitted = 0;
};

// One notarization round over an immutable snapshot of ledgers: per-ledger
// consistency proofs for changed digests, new trie version chained to the
// previous root, nodes and proofs published to `store`, root published to
// `chain`. Every registered ledger must be present in the snapshot
// (kNoRemoval); a ledger whose history was rewritten or truncated fails
// with kFork. Nothing is written when validation fails.
RoundResult notarize_round(const NotaryState& state,
                           std::span<const Ledger> snapshot,
                           ObjectStore& store, Chain& chain);

struct SingleLedgerPrev {
  Digest root;
  std::uint64_t size = 0;
};

// Single-ledger notarization: the ledger root goes on chain directly and
// the note carries the consistency proof against the previous record.
NotarizationRecord notarize_single(const Ledger& ledger,
                                   const std::optional<SingleLedgerPrev>& prev,
                                   Chain& chain);

}  // namespace notary
