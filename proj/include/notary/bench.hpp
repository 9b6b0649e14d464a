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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "notary/trie.hpp"

namespace notary {

struct BenchConfig {
  std::vector<unsigned> arities{2, 4, 8};
  std::vector<unsigned> leaf_sizes{1, 2, 4, 8};
  std::vector<std::uint64_t> ledger_counts{10000};
  std::uint64_t seed = 1;
  HashAlg alg = HashAlg::kSha256;

  void validate() const;
};

struct BenchRow {
  unsigned arity = 0;
  unsigned max_leaf = 0;
  std::uint64_t ledgers = 0;
  Measurements m;
};

inline constexpr const char* kBenchCsvHeader =
    "r,k,ledgers,nodes,path_min,path_max,path_avg,total_bytes,total_paper_bits,"
    "path_avg_bytes";

// Tuples for `count` ledgers: distinct ids "ledger-<n>" with n drawn from a
// generator seeded by `seed`; key = hash(id), value = hash(id || "v").
std::vector<Tuple> bench_tuples(HashAlg alg, std::uint64_t count, std::uint64_t seed);

BenchRow bench_cell(unsigned arity, unsigned max_leaf, const std::vector<Tuple>& tuples,
                    HashAlg alg);

std::string format_bench_row(const BenchRow& row);

// Rows in config order (ledger count, then r, then k). Writes the CSV
// header and each row to `csv` as it completes. On memory exhaustion the
// remaining cells are skipped and a "# truncated" line is written.
std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream& csv);

}  // namespace notary
