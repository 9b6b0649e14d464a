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

#include "notary/bench.hpp"

#include <cstdio>
#include <new>
#include <ostream>
#include <unordered_set>

#include "notary/simulate.hpp"

namespace notary {

void BenchConfig::validate() const {
  for (unsigned r : arities)
    if (!is_valid_arity(r))
      throw Error(Errc::kInvalidArgument, "r must be a power of two, got " + std::to_string(r));
  for (unsigned k : leaf_sizes)
    if (k < 1 || k > 256)
      throw Error(Errc::kInvalidArgument, "k must be in [1, 256], got " + std::to_string(k));
  for (auto n : ledger_counts)
    if (n < 1) throw Error(Errc::kInvalidArgument, "ledger count must be >= 1");
}

std::vector<Tuple> bench_tuples(HashAlg alg, std::uint64_t count, std::uint64_t seed) {
  SeededRng rng(seed);
  std::unordered_set<std::uint64_t> used;
  used.reserve(count);
  std::vector<Tuple> tuples;
  tuples.reserve(count);
  while (tuples.size() < count) {
    const std::uint64_t n = rng.next();
    if (!used.insert(n).second) continue;
    const std::string id = bench_ledger_id(n);
    tuples.push_back({hash(alg, id), hash_concat(alg, {as_bytes(id), as_bytes("v")})});
  }
  return tuples;
}

BenchRow bench_cell(unsigned arity, unsigned max_leaf, const std::vector<Tuple>& tuples,
                    HashAlg alg) {
  TrieParams params{arity, max_leaf, alg};
  BenchRow row{arity, max_leaf, tuples.size(), {}};
  row.m = measure_build(params, tuples, Digest::zero(alg));
  return row;
}

std::string format_bench_row(const BenchRow& row) {
  char avg[64], avg_bytes[64];
  std::snprintf(avg, sizeof avg, "%.4f", row.m.path_avg);
  std::snprintf(avg_bytes, sizeof avg_bytes, "%.2f", row.m.path_avg_bytes);
  return std::to_string(row.arity) + ',' + std::to_string(row.max_leaf) + ',' +
         std::to_string(row.ledgers) + ',' + std::to_string(row.m.nodes_count) + ',' +
         std::to_string(row.m.path_min) + ',' + std::to_string(row.m.path_max) + ',' + avg +
         ',' + std::to_string(row.m.total_size_bytes) + ',' +
         std::to_string(row.m.total_size_paper_bits) + ',' + avg_bytes;
}

std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream& csv) {
  config.validate();
  std::vector<BenchRow> rows;
  csv << kBenchCsvHeader << '\n';
  for (std::uint64_t n : config.ledger_counts) {
    try {
      const std::vector<Tuple> tuples = bench_tuples(config.alg, n, config.seed);
      for (unsigned r : config.arities) {
        for (unsigned k : config.leaf_sizes) {
          rows.push_back(bench_cell(r, k, tuples, config.alg));
          csv << format_bench_row(rows.back()) << '\n' << std::flush;
        }
      }
    } catch (const std::bad_alloc&) {
      csv << "# truncated: out of memory at ledgers=" << n << '\n' << std::flush;
      return rows;
    }
  }
  return rows;
}

}  // namespace notary
