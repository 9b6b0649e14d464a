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
#include <optional>
#include <random>
#include <vector>

#include "notary/notary.hpp"

namespace notary {

struct SimulationConfig {
  std::size_t ledgers = 10;
  std::size_t rounds = 3;
  // Probability that a ledger appends blocks in a given round.
  double append_rate = 0.5;
  std::size_t max_appends = 3;
  std::size_t payload_bytes = 24;
  // Fraction of ledgers that join after round 0.
  double late_join_rate = 0.2;
  std::uint64_t seed = 1;
  TrieParams params;
};

struct SimulationResult {
  NotaryState state;
  std::vector<Ledger> ledgers;  // final snapshot, in creation order
  std::vector<RoundResult> rounds;
};

// Deterministic for a given config: same seed, same store contents and
// chain journal.
SimulationResult simulate(const SimulationConfig& config, ObjectStore& store,
                          Chain& chain);

// Stable per-run RNG helpers (no std distributions, whose output is
// implementation-defined).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  Bytes bytes(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

std::string bench_ledger_id(std::uint64_t i);

// Files a workdir holds:
//   objects/  proofs.idx  chain.log  state.json  ledgers/<hex id>.ledger
struct Workdir {
  std::filesystem::path root;

  std::filesystem::path chain_log() const { return root / "chain.log"; }
  std::filesystem::path state_file() const { return root / "state.json"; }
  std::filesystem::path ledger_dir() const { return root / "ledgers"; }
  std::filesystem::path ledger_file(ByteView id) const;

  // Refuses a non-empty directory unless `force`, in which case its
  // notary files are removed first.
  static Workdir create(const std::filesystem::path& root, bool force);
  void write_ledgers(std::span<const Ledger> ledgers, bool base64 = false) const;
  std::optional<Ledger> read_ledger(ByteView id) const;
};

}  // namespace notary
