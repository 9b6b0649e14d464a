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

#include "notary/merkle_ledger.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace notary {

namespace {

constexpr std::uint8_t kLeafPrefix = 0x00;
constexpr std::uint8_t kNodePrefix = 0x01;

std::uint64_t largest_pow2_below(std::uint64_t n) {
  // n >= 2
  return std::bit_floor(n - 1);
}

// Hash of the (possibly unbalanced) subtree over leaves[begin, end).
Digest range_head(HashAlg alg, std::span<const Digest> leaves,
                  std::uint64_t begin, std::uint64_t end) {
  if (end - begin == 1) return leaves[begin];
  const std::uint64_t split = begin + largest_pow2_below(end - begin);
  return merkle::node_hash(alg, range_head(alg, leaves, begin, split),
                           range_head(alg, leaves, split, end));
}

// Siblings proving that the node covering [lo, hi) is part of the tree
// over [0, n), bottom-up.
std::vector<Digest> node_path(HashAlg alg, std::span<const Digest> leaves,
                              std::uint64_t lo, std::uint64_t hi) {
  std::vector<Digest> top_down;
  std::uint64_t begin = 0;
  std::uint64_t end = leaves.size();
  while (begin != lo || end != hi) {
    const std::uint64_t mid = begin + largest_pow2_below(end - begin);
    if (hi <= mid) {
      top_down.push_back(range_head(alg, leaves, mid, end));
      end = mid;
    } else {
      top_down.push_back(range_head(alg, leaves, begin, mid));
      begin = mid;
    }
  }
  std::reverse(top_down.begin(), top_down.end());
  return top_down;
}

std::size_t ceil_log2(std::uint64_t n) {
  return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

void put_be64(Bytes& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_be64(ByteView in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

namespace merkle {

Digest leaf_hash(HashAlg alg, ByteView leaf_data) {
  const std::uint8_t prefix = kLeafPrefix;
  return hash_concat(alg, {ByteView(&prefix, 1), leaf_data});
}

Digest node_hash(HashAlg alg, const Digest& left, const Digest& right) {
  const std::uint8_t prefix = kNodePrefix;
  return hash_concat(alg, {ByteView(&prefix, 1), left.view(), right.view()});
}

Digest tree_head(HashAlg alg, std::span<const Digest> leaves) {
  if (leaves.empty()) return hash(alg, ByteView{});
  return range_head(alg, leaves, 0, leaves.size());
}

ConsistencyProof prove_consistency(HashAlg alg, std::span<const Digest> leaves,
                                   std::uint64_t old_size) {
  const std::uint64_t n = leaves.size();
  if (old_size == 0 || old_size > n)
    throw Error(Errc::kInvalidRange, "consistency proof needs 0 < m <= n, got m=" +
                                         std::to_string(old_size) +
                                         " n=" + std::to_string(n));
  ConsistencyProof proof{old_size, n, {}};
  if (old_size == n) return proof;

  // The largest perfect subtree ending at old_size; it is a node of both
  // trees. When old_size is a power of two it is the old root itself and
  // the verifier already knows it.
  const unsigned level = static_cast<unsigned>(std::countr_zero(old_size));
  const std::uint64_t lo = old_size - (std::uint64_t{1} << level);
  if (lo != 0) proof.path.push_back(range_head(alg, leaves, lo, old_size));
  auto siblings = node_path(alg, leaves, lo, old_size);
  proof.path.insert(proof.path.end(), siblings.begin(), siblings.end());
  return proof;
}

InclusionProof prove_inclusion(HashAlg alg, std::span<const Digest> leaves,
                               std::uint64_t index) {
  if (index >= leaves.size())
    throw Error(Errc::kOutOfRange, "leaf index " + std::to_string(index) +
                                       " >= tree size " +
                                       std::to_string(leaves.size()));
  return {index, leaves.size(), node_path(alg, leaves, index, index + 1)};
}

bool verify_consistency(HashAlg alg, const Digest& old_root,
                        const Digest& new_root, const ConsistencyProof& proof) {
  const std::uint64_t m = proof.old_size;
  const std::uint64_t n = proof.new_size;
  if (m == 0 || m > n) return false;
  if (proof.path.size() > ceil_log2(n) + 1) return false;
  if (m == n) return proof.path.empty() && old_root == new_root;

  std::vector<Digest> path;
  path.reserve(proof.path.size() + 1);
  if (std::has_single_bit(m)) path.push_back(old_root);
  path.insert(path.end(), proof.path.begin(), proof.path.end());
  if (path.empty()) return false;

  std::uint64_t fn = m - 1;
  std::uint64_t sn = n - 1;
  while (fn & 1) {
    fn >>= 1;
    sn >>= 1;
  }
  Digest fr = path[0];
  Digest sr = path[0];
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Digest& c = path[i];
    if (sn == 0) return false;
    if ((fn & 1) || fn == sn) {
      fr = node_hash(alg, c, fr);
      sr = node_hash(alg, c, sr);
      if (!(fn & 1)) {
        while (!(fn & 1) && fn != 0) {
          fn >>= 1;
          sn >>= 1;
        }
      }
    } else {
      sr = node_hash(alg, sr, c);
    }
    fn >>= 1;
    sn >>= 1;
  }
  return sn == 0 && fr == old_root && sr == new_root;
}

bool verify_inclusion_leaf(HashAlg alg, const Digest& root, const Digest& leaf,
                           const InclusionProof& proof) {
  if (proof.leaf_index >= proof.tree_size) return false;
  if (proof.path.size() > ceil_log2(proof.tree_size)) return false;
  std::uint64_t fn = proof.leaf_index;
  std::uint64_t sn = proof.tree_size - 1;
  Digest r = leaf;
  for (const Digest& p : proof.path) {
    if (sn == 0) return false;
    if ((fn & 1) || fn == sn) {
      r = node_hash(alg, p, r);
      if (!(fn & 1)) {
        while (!(fn & 1) && fn != 0) {
          fn >>= 1;
          sn >>= 1;
        }
      }
    } else {
      r = node_hash(alg, r, p);
    }
    fn >>= 1;
    sn >>= 1;
  }
  return sn == 0 && r == root;
}

}  // namespace merkle

Bytes ConsistencyProof::serialize() const {
  Bytes out;
  out.reserve(16 + path.size() * Digest::kMaxSize);
  put_be64(out, old_size);
  put_be64(out, new_size);
  for (const Digest& d : path) out.insert(out.end(), d.view().begin(), d.view().end());
  return out;
}

ConsistencyProof ConsistencyProof::parse(ByteView bytes, HashAlg alg) {
  const std::size_t dlen = digest_size(alg);
  if (bytes.size() < 16 || (bytes.size() - 16) % dlen != 0)
    throw Error(Errc::kParse, "malformed consistency proof of " +
                                  std::to_string(bytes.size()) + " bytes");
  ConsistencyProof proof;
  proof.old_size = get_be64(bytes.subspan(0, 8));
  proof.new_size = get_be64(bytes.subspan(8, 8));
  for (std::size_t off = 16; off < bytes.size(); off += dlen)
    proof.path.emplace_back(bytes.subspan(off, dlen));
  return proof;
}

Digest block_hash(HashAlg alg, std::uint64_t index, ByteView payload) {
  Bytes prefix;
  put_be64(prefix, index);
  return hash_concat(alg, {prefix, payload});
}

void Ledger::append(ByteView payload) {
  Block b;
  b.index = blocks_.size();
  b.payload.assign(payload.begin(), payload.end());
  b.block_hash = block_hash(alg_, b.index, payload);
  blocks_.push_back(std::move(b));
}

Ledger Ledger::appended(ByteView payload) const {
  Ledger next = *this;
  next.append(payload);
  return next;
}

std::vector<Digest> Ledger::leaves(std::size_t n) const {
  if (n > blocks_.size())
    throw Error(Errc::kOutOfRange, "ledger has only " +
                                       std::to_string(blocks_.size()) + " blocks");
  std::vector<Digest> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(merkle::leaf_hash(alg_, blocks_[i].block_hash.view()));
  return out;
}

Digest Ledger::root_at(std::size_t n) const {
  return merkle::tree_head(alg_, leaves(n));
}

ConsistencyProof Ledger::prove_consistency(std::uint64_t m,
                                           std::uint64_t n) const {
  if (m == 0 || m > n)
    throw Error(Errc::kInvalidRange, "consistency proof needs 0 < m <= n");
  if (n > blocks_.size())
    throw Error(Errc::kInvalidRange, "n exceeds ledger size");
  auto lv = leaves(n);
  return merkle::prove_consistency(alg_, lv, m);
}

InclusionProof Ledger::prove_inclusion(std::uint64_t index) const {
  auto lv = leaves();
  return merkle::prove_inclusion(alg_, lv, index);
}

void Ledger::write(std::ostream& out, bool base64) const {
  out << "notary-ledger " << hash_alg_name(alg_) << ' '
      << (base64 ? "base64" : "hex") << ' ' << to_hex(id_) << '\n';
  for (const Block& b : blocks_)
    out << (base64 ? to_base64(b.payload) : to_hex(b.payload)) << '\n';
}

Ledger Ledger::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(Errc::kParse, "ledger file is empty");
  std::istringstream header(line);
  std::string magic, alg_name, encoding, id_hex;
  header >> magic >> alg_name >> encoding >> id_hex;
  if (magic != "notary-ledger" || (encoding != "hex" && encoding != "base64"))
    throw Error(Errc::kParse, "bad ledger header '" + line + "'");
  Ledger ledger(parse_hash_alg(alg_name), from_hex(id_hex));
  const bool b64 = encoding == "base64";
  while (std::getline(in, line)) {
    Bytes payload = b64 ? from_base64(line) : from_hex(line);
    ledger.append(payload);
  }
  return ledger;
}

Digest ledger_root(const Ledger& ledger) { return ledger.root(); }

bool verify_consistency(HashAlg alg, const Digest& old_root,
                        const Digest& new_root, const ConsistencyProof& proof) {
  return merkle::verify_consistency(alg, old_root, new_root, proof);
}

bool verify_inclusion(HashAlg alg, const Digest& root, const Digest& block_hash,
                      const InclusionProof& proof) {
  return merkle::verify_inclusion_leaf(
      alg, root, merkle::leaf_hash(alg, block_hash.view()), proof);
}

}  // namespace notary
