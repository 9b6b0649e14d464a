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
#include <string_view>
#include <vector>

#include "notary/chain.hpp"
#include "notary/merkle_ledger.hpp"
#include "notary/store.hpp"
#include "notary/trie.hpp"

namespace notary {

// Fault classes a dishonest notary or storage host could introduce. Used by
// the soundness tests and the CLI `tamper` command.
enum class Fault {
  kRemoveKey,     // drop the id from the trie from `round` on
  kForkValue,     // replace the id's value at `round` with an unrelated digest
  kChainRoot,     // overwrite the published root of `round`
  kCorruptNode,   // flip a byte of the leaf on the id's path at `round`
  kCorruptProof,  // flip a byte of the id's consistency proof at `round`
};

std::string_view fault_name(Fault fault);
Fault parse_fault(std::string_view name);

// Applies the fault and returns the (possibly rewritten) chain records.
// Throws kInvalidArgument when the fault does not apply to the given
// id/round (e.g. no proof exists at that round).
std::vector<NotarizationRecord> inject_fault(Fault fault, const TrieParams& params,
                                             ByteView id, std::uint64_t round,
                                             std::vector<NotarizationRecord> records,
                                             ObjectStore& store);

}  // namespace notary
