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
#include <string_view>
#include <optional>
#include <span>
#include <vector>

#include "notary/crypto.hpp"

namespace notary {

// Merkle tree head construction with 0x00/0x01 domain separation, as used by
// Certificate Transparency logs. Functions take already leaf-hashed inputs.
namespace merkle {

Digest leaf_hash(HashAlg alg, ByteView leaf_data);
Digest node_hash(HashAlg alg, const Digest& left, const Digest& right);

// Tree head over the leaves; hash("") for an empty range.
Digest tree_head(HashAlg alg, std::span<const Digest> leaves);

}  // namespace merkle

struct ConsistencyProof {
  std::uint64_t old_size = 0;
  std::uint64_t new_size = 0;
  std::vector<Digest> path;

  // 8-byte big-endian old_size, 8-byte big-endian new_size, then the path
  // digests back to back.
  Bytes serialize() const;
  static ConsistencyProof parse(ByteView bytes, HashAlg alg);

  friend bool operator==(const ConsistencyProof&,
                         const ConsistencyProof&) = default;
};

struct InclusionProof {
  std::uint64_t leaf_index = 0;
  std::uint64_t tree_size = 0;
  std::vector<Digest> path;

  friend bool operator==(const InclusionProof&,
                         const InclusionProof&) = default;
};

namespace merkle {

ConsistencyProof prove_consistency(HashAlg alg, std::span<const Digest> leaves,
                                   std::uint64_t old_size);
InclusionProof prove_inclusion(HashAlg alg, std::span<const Digest> leaves,
                               std::uint64_t index);

bool verify_consistency(HashAlg alg, const Digest& old_root,
                        const Digest& new_root, const ConsistencyProof& proof);
bool verify_inclusion_leaf(HashAlg alg, const Digest& root,
                           const Digest& leaf, const InclusionProof& proof);

}  // namespace merkle

struct Block {
  std::uint64_t index = 0;
  Bytes payload;
  Digest block_hash;
};

// hash(8-byte big-endian index || payload)
Digest block_hash(HashAlg alg, std::uint64_t index, ByteView payload);

// Append-only sequence of blocks. Copies are independent snapshots.
class Ledger {
 public:
  Ledger(HashAlg alg, Bytes id) : alg_(alg), id_(std::move(id)) {}
  Ledger(HashAlg alg, std::string_view id)
      : Ledger(alg, Bytes(id.begin(), id.end())) {}

  HashAlg alg() const { return alg_; }
  const Bytes& id() const { return id_; }
  std::size_t size() const { return blocks_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }

  void append(ByteView payload);
  Ledger appended(ByteView payload) const;

  // Leaf hashes hash(0x00 || block_hash) for the first `n` blocks.
  std::vector<Digest> leaves(std::size_t n) const;
  std::vector<Digest> leaves() const { return leaves(size()); }

  Digest root() const { return root_at(size()); }
  Digest root_at(std::size_t n) const;

  ConsistencyProof prove_consistency(std::uint64_t m, std::uint64_t n) const;
  InclusionProof prove_inclusion(std::uint64_t index) const;

  // Newline-delimited export: header "notary-ledger <hash> <hex|base64>
  // <hex id>", then one encoded payload per line.
  void write(std::ostream& out, bool base64 = false) const;
  static Ledger read(std::istream& in);

 private:
  HashAlg alg_;
  Bytes id_;
  std::vector<Block> blocks_;
};

Digest ledger_root(const Ledger& ledger);
bool verify_consistency(HashAlg alg, const Digest& old_root,
                        const Digest& new_root, const ConsistencyProof& proof);
bool verify_inclusion(HashAlg alg, const Digest& root, const Digest& block_hash,
                      const InclusionProof& proof);

}  // namespace notary
