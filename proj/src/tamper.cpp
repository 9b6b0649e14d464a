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

#include "notary/tamper.hpp"

#include <algorithm>

namespace notary {

namespace {

// Rebuilds every version from `from` on with `edit` applied to its tuples,
// re-chaining the roots.
std::vector<NotarizationRecord> rewrite_history(
    const TrieParams& params, std::uint64_t from, std::vector<NotarizationRecord> records,
    ObjectStore& store, const std::function<void(std::uint64_t, std::vector<Tuple>&)>& edit) {
  Digest prev = from == 0 ? Digest::zero(params.alg) : records[from - 1].trie_root;
  for (std::uint64_t v = from; v < records.size(); ++v) {
    std::vector<Tuple> tuples = all_tuples({params, records[v].trie_root, &store});
    edit(v, tuples);
    TrieVersion rebuilt = build(params, std::move(tuples), prev, store);
    records[v].trie_root = rebuilt.root_digest;
    prev = rebuilt.root_digest;
  }
  return records;
}

void check_round(std::uint64_t round, const std::vector<NotarizationRecord>& records) {
  if (round >= records.size())
    throw Error(Errc::kInvalidArgument, "round " + std::to_string(round) + " not published");
}

}  // namespace

std::string_view fault_name(Fault fault) {
  switch (fault) {
    case Fault::kRemoveKey: return "remove-key";
    case Fault::kForkValue: return "fork-value";
    case Fault::kChainRoot: return "chain-root";
    case Fault::kCorruptNode: return "corrupt-node";
    case Fault::kCorruptProof: return "corrupt-proof";
  }
  return "unknown";
}

Fault parse_fault(std::string_view name) {
  for (Fault f : {Fault::kRemoveKey, Fault::kForkValue, Fault::kChainRoot,
                  Fault::kCorruptNode, Fault::kCorruptProof})
    if (fault_name(f) == name) return f;
  throw Error(Errc::kInvalidArgument, "unknown fault '" + std::string(name) + "'");
}

std::vector<NotarizationRecord> inject_fault(Fault fault, const TrieParams& params,
                                             ByteView id, std::uint64_t round,
                                             std::vector<NotarizationRecord> records,
                                             ObjectStore& store) {
  check_round(round, records);
  const Digest key = hash(params.alg, id);
  switch (fault) {
    case Fault::kRemoveKey: {
      return rewrite_history(params, round, std::move(records), store,
                             [&](std::uint64_t, std::vector<Tuple>& tuples) {
                               std::erase_if(tuples, [&](const Tuple& t) { return t.key == key; });
                               if (tuples.empty())
                                 throw Error(Errc::kInvalidArgument,
                                             "removing the only ledger leaves an empty trie");
                             });
    }
    case Fault::kForkValue: {
      auto old = lookup({params, records[round].trie_root, &store}, key);
      if (!old) throw Error(Errc::kInvalidArgument, "id absent at that round");
      const Digest forged = hash_concat(params.alg, {as_bytes("fork"), old->view()});
      records = rewrite_history(params, round, std::move(records), store,
                                [&](std::uint64_t v, std::vector<Tuple>& tuples) {
                                  if (v != round) return;
                                  for (Tuple& t : tuples)
                                    if (t.key == key) t.value = forged;
                                });
      // A dishonest notary also publishes something where the proof should be.
      ConsistencyProof bogus{1, 2, {forged}};
      Digest address = store.put(bogus.serialize());
      store.override_proof({key, round, address});
      return records;
    }
    case Fault::kChainRoot: {
      records[round].trie_root =
          hash_concat(params.alg, {as_bytes("bogus root"), records[round].trie_root.view()});
      return records;
    }
    case Fault::kCorruptNode: {
      SearchPath path = search_path({params, records[round].trie_root, &store}, key);
      Bytes node = path.steps.back().node;
      const Digest address = hash(params.alg, node);
      node[node.size() / 2] ^= 0x5a;
      store.replace_raw(address, std::move(node));
      return records;
    }
    case Fault::kCorruptProof: {
      auto address = store.find_proof(key, round);
      if (!address)
        throw Error(Errc::kInvalidArgument, "no consistency proof at that round");
      Bytes proof = store.get(*address);
      proof.back() ^= 0x01;
      store.replace_raw(*address, std::move(proof));
      return records;
    }
  }
  return records;
}

}  // namespace notary
