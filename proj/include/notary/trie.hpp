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

#include <bitset>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "notary/crypto.hpp"
#include "notary/store.hpp"

namespace notary {

struct TrieParams {
  unsigned arity = 4;     // r: children per internal node, power of two
  unsigned max_leaf = 4;  // k: tuples per leaf, 1..256
  HashAlg alg = HashAlg::kSha256;

  void validate() const;
  unsigned bitmap_bytes() const { return (arity + 7) / 8; }

  friend bool operator==(const TrieParams&, const TrieParams&) = default;
};

struct Tuple {
  Digest key;    // hash of the ledger id
  Digest value;  // ledger digest

  friend bool operator==(const Tuple&, const Tuple&) = default;
};

// A key/value pair to merge into a trie. A missing value is a deletion
// request, which the trie rejects.
struct Change {
  Digest key;
  std::optional<Digest> value;
};

enum class NodeKind : std::uint8_t {
  kInternal = 0x01,
  kLeaf = 0x02,
  kRootInternal = 0x03,
  kRootLeaf = 0x04,
};

struct Node {
  NodeKind kind = NodeKind::kLeaf;
  // Internal kinds: bit i set iff a child with label i exists; one child
  // digest per set bit in ascending label order.
  std::bitset<256> bitmap;
  std::vector<Digest> children;
  // Leaf kinds.
  std::vector<Tuple> tuples;
  // Root kinds: previous root digest, all-zero for the first version.
  Digest prev_root;

  static Node leaf(std::vector<Tuple> tuples);
  static Node internal(std::span<const std::pair<unsigned, Digest>> children);

  bool is_root() const {
    return kind == NodeKind::kRootInternal || kind == NodeKind::kRootLeaf;
  }
  bool is_leaf() const {
    return kind == NodeKind::kLeaf || kind == NodeKind::kRootLeaf;
  }
  // Converts to the matching root kind and sets the chain link.
  Node& make_root(const Digest& prev);

  std::optional<Digest> child(unsigned label) const;
  std::optional<Digest> find(const Digest& key) const;
};

// Canonical byte layout:
//   tag (1 byte)
//   internal kinds: ceil(r/8) bitmap bytes, label 0 in the MSB of the first
//                   byte; then child digests in ascending label order
//   leaf kinds:     count-1 (1 byte); then key||value, ascending by key
//   root kinds:     prev_root appended last
// Tuples are sorted before encoding; other invariant violations throw
// kCanonicalization.
Bytes serialize_node(const Node& node, const TrieParams& params);
// Strict inverse of serialize_node. Rejects anything serialize_node would
// not produce (kParse).
Node parse_node(ByteView bytes, const TrieParams& params);
Digest node_digest(const Node& node, const TrieParams& params);

// Receives every node created by build/update.
class NodeSink {
 public:
  virtual ~NodeSink() = default;
  virtual void emit(const Digest& digest, ByteView bytes) = 0;
};

class StoreSink final : public NodeSink {
 public:
  explicit StoreSink(ObjectStore& store) : store_(store) {}
  void emit(const Digest&, ByteView bytes) override { store_.put(bytes); }

 private:
  ObjectStore& store_;
};

struct TrieVersion {
  TrieParams params;
  Digest root_digest;
  const ObjectStore* store = nullptr;
};

TrieVersion build(const TrieParams& params, std::vector<Tuple> assoc,
                  const Digest& prev_root, ObjectStore& store);
Digest build(const TrieParams& params, std::vector<Tuple> assoc,
             const Digest& prev_root, NodeSink& sink);

// Path-copying update. The result equals build() over the merged
// association set with prev_root = prev.root_digest. Unchanged subtrees are
// reused and not re-emitted.
TrieVersion update(const TrieVersion& prev, std::span<const Change> changes,
                   ObjectStore& store);
Digest update(const TrieVersion& prev, std::span<const Change> changes,
              NodeSink& sink);

// Throws kMissingNode if a node on the path cannot be resolved.
std::optional<Digest> lookup(const TrieVersion& version, const Digest& key);

struct PathStep {
  Bytes node;                    // serialized node
  std::optional<unsigned> label; // edge taken; empty at the terminal node
};

struct SearchPath {
  std::vector<PathStep> steps;
  std::optional<Digest> value;
};

SearchPath search_path(const TrieVersion& version, const Digest& key);

// Recomputes the digest chain root-to-terminal and returns the value the
// path proves (or nullopt for absence). Throws kParse/kIntegrityFailure on
// any broken link or non-canonical node.
std::optional<Digest> verify_search_path(const TrieParams& params,
                                         const Digest& root_digest,
                                         const Digest& key,
                                         std::span<const PathStep> steps);

// Root node of a version.
Node load_root(const TrieVersion& version);
// All tuples of a version in key order.
std::vector<Tuple> all_tuples(const TrieVersion& version);

struct Measurements {
  std::uint64_t keys = 0;
  std::uint64_t nodes_count = 0;
  std::uint64_t path_min = 0;
  std::uint64_t path_max = 0;
  double path_avg = 0;
  std::uint64_t total_size_bytes = 0;
  // Bitmap of exactly r bits, leaf header of ceil(log2(k)) bits, digests;
  // no tag byte.
  std::uint64_t total_size_paper_bits = 0;
  double path_avg_bytes = 0;
};

Measurements stats(const TrieVersion& version);
// Builds without storing anything and measures on the fly. Produces the
// same numbers as stats() on the equivalent stored version.
Measurements measure_build(const TrieParams& params, std::vector<Tuple> assoc,
                           const Digest& prev_root);

// Size of a node under the bit-level accounting above.
std::uint64_t paper_bits(const Node& node, const TrieParams& params);

}  // namespace notary
