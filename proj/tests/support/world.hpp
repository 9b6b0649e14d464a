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
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "notary/audit.hpp"
#include "notary/simulate.hpp"
#include "notary/tamper.hpp"

namespace notary::testing {

// An honest simulated deployment held entirely in memory.
struct World {
  SimulationConfig config;
  std::unique_ptr<MemoryStore> store;
  Chain chain;
  SimulationResult sim;
  std::vector<NotarizationRecord> records;

  std::vector<Digest> roots() const {
    std::vector<Digest> out;
    for (const auto& r : records) out.push_back(r.trie_root);
    return out;
  }
  const TrieParams& params() const { return config.params; }

  std::optional<Digest> value_at(const std::string& id, std::uint64_t round) const {
    return lookup({config.params, records[round].trie_root, store.get()},
                  hash(config.params.alg, id));
  }
  AuditReport audit(const std::string& id,
                    const std::optional<AuditClaim>& claim = std::nullopt) const {
    auto r = roots();
    return audit_ledger(config.params, as_bytes(id), claim, r, *store);
  }
};

inline SimulationConfig random_config(std::mt19937_64& rng) {
  static constexpr unsigned kArities[] = {2, 4, 8, 16};
  SimulationConfig c;
  c.ledgers = 2 + rng() % 14;
  c.rounds = 2 + rng() % 6;
  c.append_rate = 0.2 + 0.6 * static_cast<double>(rng() % 1000) / 1000.0;
  c.max_appends = 1 + rng() % 4;
  c.payload_bytes = 8 + rng() % 32;
  c.late_join_rate = 0.3;
  c.seed = rng();
  c.params = TrieParams{kArities[rng() % 4], static_cast<unsigned>(1 + rng() % 4),
                        HashAlg::kSha256};
  return c;
}

inline std::unique_ptr<World> make_world(const SimulationConfig& config) {
  auto w = std::make_unique<World>();
  w->config = config;
  w->store = std::make_unique<MemoryStore>(config.params.alg);
  w->sim = simulate(config, *w->store, w->chain);
  w->records = w->chain.records();
  return w;
}

struct Target {
  std::string id;
  std::uint64_t round = 0;
};

// Picks an (id, round) at which `fault` is meaningful, or nothing.
inline std::optional<Target> pick_target(const World& w, Fault fault, std::mt19937_64& rng) {
  std::vector<Target> candidates;
  const std::uint64_t rounds = w.records.size();
  // Fewest keys in any version from round t on; removal must leave one.
  std::vector<std::size_t> min_keys_from(rounds + 1, SIZE_MAX);
  for (std::uint64_t t = rounds; t-- > 0;)
    min_keys_from[t] = std::min(
        min_keys_from[t + 1],
        all_tuples({w.config.params, w.records[t].trie_root, w.store.get()}).size());
  for (std::size_t i = 0; i < w.config.ledgers; ++i) {
    const std::string id = bench_ledger_id(i);
    const Digest key = hash(w.params().alg, id);
    for (std::uint64_t t = 0; t < rounds; ++t) {
      const bool here = w.value_at(id, t).has_value();
      const bool before = t > 0 && w.value_at(id, t - 1).has_value();
      bool ok = false;
      switch (fault) {
        case Fault::kRemoveKey:
          ok = before && min_keys_from[t] > 1;
          break;
        case Fault::kForkValue:
          ok = before && here;
          break;
        case Fault::kChainRoot:
        case Fault::kCorruptNode:
          ok = here;
          break;
        case Fault::kCorruptProof:
          ok = w.store->find_proof(key, t).has_value();
          break;
      }
      if (ok) candidates.push_back({id, t});
    }
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[rng() % candidates.size()];
}

// The property a fault must flag.
inline const PropertyOutcome& flagged_property(const AuditReport& r, Fault fault) {
  switch (fault) {
    case Fault::kRemoveKey: return r.no_removal;
    case Fault::kForkValue: return r.no_forks;
    case Fault::kChainRoot: return r.chain_match;
    case Fault::kCorruptNode: return r.no_alternative_histories;
    case Fault::kCorruptProof: return r.no_forks;
  }
  return r.no_forks;
}

inline void apply_fault(World& w, Fault fault, const Target& t) {
  w.records = inject_fault(fault, w.config.params, as_bytes(t.id), t.round,
                           std::move(w.records), *w.store);
}

}  // namespace notary::testing
