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

#include "notary/notary.hpp"

#include <fstream>

#include <json.hpp>

namespace notary {

namespace {

class CountingSink final : public NodeSink {
 public:
  explicit CountingSink(ObjectStore& store) : store_(store) {}
  void emit(const Digest&, ByteView bytes) override {
    store_.put(bytes);
    ++count;
  }
  std::size_t count = 0;

 private:
  ObjectStore& store_;
};

struct PendingProof {
  Digest key;
  Bytes bytes;
};

}  // namespace

NotaryState NotaryState::initial(const TrieParams& params) {
  params.validate();
  NotaryState s;
  s.params = params;
  s.last_root = Digest::zero(params.alg);
  return s;
}

void NotaryState::save(const std::filesystem::path& file) const {
  nlohmann::json j;
  j["hash"] = hash_alg_name(params.alg);
  j["r"] = params.arity;
  j["k"] = params.max_leaf;
  j["round"] = round;
  j["last_root"] = last_root.hex();
  auto& ledgers = j["ledgers"] = nlohmann::json::array();
  for (const auto& [key, st] : registry)
    ledgers.push_back({{"id", to_hex(st.id)},
                       {"digest", st.digest.hex()},
                       {"size", st.size}});
  std::ofstream out(file, std::ios::trunc);
  out << j.dump(1) << '\n';
  if (!out) throw Error(Errc::kIo, "cannot write " + file.string());
}

NotaryState NotaryState::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::kIo, "cannot read " + file.string());
  nlohmann::json j;
  try {
    in >> j;
    NotaryState s;
    s.params.alg = parse_hash_alg(j.at("hash").get<std::string>());
    s.params.arity = j.at("r").get<unsigned>();
    s.params.max_leaf = j.at("k").get<unsigned>();
    s.params.validate();
    s.round = j.at("round").get<std::uint64_t>();
    s.last_root = Digest::from_hex(j.at("last_root").get<std::string>());
    for (const auto& l : j.at("ledgers")) {
      LedgerState st{from_hex(l.at("id").get<std::string>()),
                     Digest::from_hex(l.at("digest").get<std::string>()),
                     l.at("size").get<std::uint64_t>()};
      Digest key = hash(s.params.alg, st.id);
      s.registry.emplace(key, std::move(st));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kParse, file.string() + ": " + e.what());
  }
}

RoundResult notarize_round(const NotaryState& state,
                           std::span<const Ledger> snapshot,
                           ObjectStore& store, Chain& chain) {
  const TrieParams& params = state.params;
  if (store.alg() != params.alg)
    throw Error(Errc::kInvalidArgument, "store uses a different hash");
  if (chain.height() != state.round)
    throw Error(Errc::kNonContiguousSeq,
                "chain height " + std::to_string(chain.height()) +
                    " does not match notary round " + std::to_string(state.round));

  // (1) digests of the snapshot
  std::map<Digest, const Ledger*> by_key;
  for (const Ledger& l : snapshot) {
    if (l.alg() != params.alg)
      throw Error(Errc::kInvalidArgument, "ledger uses a different hash");
    if (!by_key.emplace(hash(params.alg, l.id()), &l).second)
      throw Error(Errc::kDuplicateKey, "ledger id " + to_hex(l.id()) +
                                           " appears twice in the snapshot");
  }
  for (const auto& [key, st] : state.registry)
    if (!by_key.contains(key))
      throw Error(Errc::kNoRemoval, "registered ledger " + to_hex(st.id) +
                                        " missing from the snapshot");

  NotaryState next = state;
  std::vector<Change> changes;
  std::vector<PendingProof> proofs;
  for (const auto& [key, ledger] : by_key) {
    const Digest digest = ledger->root();
    const std::uint64_t size = ledger->size();
    auto it = state.registry.find(key);
    if (it == state.registry.end()) {
      next.registry.emplace(key, LedgerState{ledger->id(), digest, size});
      changes.push_back({key, digest});
      continue;
    }
    const LedgerState& old = it->second;
    if (old.digest == digest && old.size == size) continue;
    if (size <= old.size)
      throw Error(Errc::kFork, "ledger " + to_hex(ledger->id()) +
                                   " shrank or was rewritten");
    // (2) consistency proof; a newly non-empty ledger has nothing to link
    if (old.size > 0) {
      ConsistencyProof proof = ledger->prove_consistency(old.size, size);
      if (!verify_consistency(params.alg, old.digest, digest, proof))
        throw Error(Errc::kFork, "ledger " + to_hex(ledger->id()) +
                                     " is not an extension of its notarized state");
      proofs.push_back({key, proof.serialize()});
    }
    next.registry[key] = LedgerState{ledger->id(), digest, size};
    changes.push_back({key, digest});
  }

  RoundResult result;
  for (const PendingProof& p : proofs) {
    Digest address = store.put(p.bytes);
    store.index_proof({p.key, state.round, address});
  }
  result.proofs_stored = proofs.size();

  // (3)+(4) new trie version, nodes published as they are created
  CountingSink sink(store);
  if (state.last_root.is_zero()) {
    std::vector<Tuple> assoc;
    for (const auto& [key, st] : next.registry) assoc.push_back({key, st.digest});
    next.last_root = build(params, std::move(assoc), state.last_root, sink);
  } else {
    TrieVersion prev{params, state.last_root, &store};
    next.last_root = update(prev, changes, sink);
  }
  result.nodes_emitted = sink.count;

  // (5) publish
  result.record = NotarizationRecord{state.round, next.last_root, {}};
  chain.publish(result.record);
  next.round = state.round + 1;
  result.state = std::move(next);
  return result;
}

NotarizationRecord notarize_single(const Ledger& ledger,
                                   const std::optional<SingleLedgerPrev>& prev,
                                   Chain& chain) {
  NotarizationRecord record{chain.height(), ledger.root(), {}};
  if (prev) {
    if (ledger.size() < prev->size)
      throw Error(Errc::kFork, "ledger shrank since the previous notarization");
    if (ledger.root_at(prev->size) != prev->root)
      throw Error(Errc::kFork, "ledger history differs from the notarized one");
    if (prev->size > 0)
      record.note = ledger.prove_consistency(prev->size, ledger.size()).serialize();
  }
  chain.publish(record);
  return record;
}

}  // namespace notary
