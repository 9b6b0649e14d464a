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

#include "notary/simulate.hpp"

#include <fstream>

namespace notary {

namespace fs = std::filesystem;

Bytes SeededRng::bytes(std::size_t n) {
  Bytes out(n);
  for (std::size_t i = 0; i < n; i += 8) {
    std::uint64_t v = engine_();
    for (std::size_t j = 0; j < 8 && i + j < n; ++j)
      out[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
  }
  return out;
}

std::string bench_ledger_id(std::uint64_t i) { return "ledger-" + std::to_string(i); }

SimulationResult simulate(const SimulationConfig& config, ObjectStore& store,
                          Chain& chain) {
  config.params.validate();
  if (config.ledgers == 0 || config.rounds == 0)
    throw Error(Errc::kInvalidArgument, "need at least one ledger and one round");
  SeededRng rng(config.seed);

  SimulationResult result;
  result.state = NotaryState::initial(config.params);

  // Ledger 0 always joins at round 0 so the first trie is never empty.
  std::vector<std::uint64_t> join_round(config.ledgers, 0);
  for (std::size_t i = 1; i < config.ledgers; ++i)
    if (config.rounds > 1 && rng.unit() < config.late_join_rate)
      join_round[i] = 1 + rng.below(config.rounds - 1);

  std::vector<Ledger> ledgers;
  ledgers.reserve(config.ledgers);
  for (std::size_t i = 0; i < config.ledgers; ++i)
    ledgers.emplace_back(config.params.alg, bench_ledger_id(i));

  for (std::size_t round = 0; round < config.rounds; ++round) {
    std::vector<Ledger> snapshot;
    for (std::size_t i = 0; i < config.ledgers; ++i) {
      if (join_round[i] > round) continue;
      Ledger& l = ledgers[i];
      if (join_round[i] == round) {
        l.append(rng.bytes(config.payload_bytes));
      } else if (rng.unit() < config.append_rate) {
        const std::size_t n = 1 + rng.below(config.max_appends);
        for (std::size_t b = 0; b < n; ++b) l.append(rng.bytes(config.payload_bytes));
      }
      snapshot.push_back(l);
    }
    RoundResult r = notarize_round(result.state, snapshot, store, chain);
    result.state = r.state;
    result.rounds.push_back(std::move(r));
  }
  result.ledgers = std::move(ledgers);
  return result;
}

fs::path Workdir::ledger_file(ByteView id) const {
  return ledger_dir() / (to_hex(id) + ".ledger");
}

Workdir Workdir::create(const fs::path& root, bool force) {
  std::error_code ec;
  if (fs::exists(root, ec) && !fs::is_empty(root, ec)) {
    if (!force)
      throw Error(Errc::kConflict, "workdir " + root.string() +
                                       " is not empty (use --force)");
    for (const char* name : {"objects", "ledgers", "proofs.idx", "chain.log", "state.json"})
      fs::remove_all(root / name, ec);
  }
  fs::create_directories(root / "ledgers", ec);
  if (ec) throw Error(Errc::kIo, "cannot create " + root.string());
  return Workdir{root};
}

void Workdir::write_ledgers(std::span<const Ledger> ledgers, bool base64) const {
  std::error_code ec;
  fs::create_directories(ledger_dir(), ec);
  for (const Ledger& l : ledgers) {
    std::ofstream out(ledger_file(l.id()), std::ios::trunc | std::ios::binary);
    l.write(out, base64);
    if (!out) throw Error(Errc::kIo, "cannot write ledger " + to_hex(l.id()));
  }
}

std::optional<Ledger> Workdir::read_ledger(ByteView id) const {
  std::ifstream in(ledger_file(id), std::ios::binary);
  if (!in) return std::nullopt;
  return Ledger::read(in);
}

}  // namespace notary
