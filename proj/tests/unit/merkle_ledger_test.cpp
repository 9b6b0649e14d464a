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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace notary {
namespace {

constexpr HashAlg kAlg = HashAlg::kSha256;

// --- Reference construction, written straight from the recursive
// definitions over explicit leaf lists. Independent of the library's
// iterative proof generation and verification.

std::size_t down_to_pow2(std::size_t n) {
  std::size_t k = 1;
  while (k * 2 < n) k *= 2;
  return k;
}

std::vector<Digest> slice(const std::vector<Digest>& v, std::size_t b, std::size_t e) {
  return {v.begin() + static_cast<long>(b), v.begin() + static_cast<long>(e)};
}

Digest ref_node(const Digest& l, const Digest& r) {
  Bytes pre{0x01};
  pre.insert(pre.end(), l.view().begin(), l.view().end());
  pre.insert(pre.end(), r.view().begin(), r.view().end());
  return hash(kAlg, pre);
}

Digest ref_leaf(ByteView data) {
  Bytes pre{0x00};
  pre.insert(pre.end(), data.begin(), data.end());
  return hash(kAlg, pre);
}

Digest ref_mth(const std::vector<Digest>& leaves) {
  if (leaves.empty()) return hash(kAlg, "");
  if (leaves.size() == 1) return leaves[0];
  const std::size_t k = down_to_pow2(leaves.size());
  return ref_node(ref_mth(slice(leaves, 0, k)), ref_mth(slice(leaves, k, leaves.size())));
}

std::vector<Digest> ref_path(std::size_t m, const std::vector<Digest>& d) {
  if (d.size() <= 1) return {};
  const std::size_t k = down_to_pow2(d.size());
  std::vector<Digest> out;
  if (m < k) {
    out = ref_path(m, slice(d, 0, k));
    out.push_back(ref_mth(slice(d, k, d.size())));
  } else {
    out = ref_path(m - k, slice(d, k, d.size()));
    out.push_back(ref_mth(slice(d, 0, k)));
  }
  return out;
}

std::vector<Digest> ref_subproof(std::size_t m, const std::vector<Digest>& d, bool b) {
  const std::size_t n = d.size();
  if (m == n) return b ? std::vector<Digest>{} : std::vector<Digest>{ref_mth(d)};
  const std::size_t k = down_to_pow2(n);
  std::vector<Digest> out;
  if (m <= k) {
    out = ref_subproof(m, slice(d, 0, k), b);
    out.push_back(ref_mth(slice(d, k, n)));
  } else {
    out = ref_subproof(m - k, slice(d, k, n), false);
    out.push_back(ref_mth(slice(d, 0, k)));
  }
  return out;
}

std::vector<Digest> random_leaves(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Digest> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(ref_leaf(as_bytes(std::to_string(rng()))));
  return out;
}

std::size_t ceil_log2(std::size_t n) {
  std::size_t b = 0;
  while ((std::size_t{1} << b) < n) ++b;
  return b;
}

Digest flip(Digest d, std::size_t byte, std::uint8_t mask = 0x01) {
  d.data()[byte] ^= mask;
  return d;
}

// Certificate Transparency reference vectors (leaf inputs and tree heads).
const std::vector<std::string> kCtInputs = {
    "", std::string("\x00", 1), "\x10", "\x20\x21", "\x30\x31", "\x40\x41\x42\x43",
    "\x50\x51\x52\x53\x54\x55\x56\x57",
    "\x60\x61\x62\x63\x64\x65\x66\x67\x68\x69\x6a\x6b\x6c\x6d\x6e\x6f"};
const std::vector<std::string> kCtRoots = {
    "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d",
    "fac54203e7cc696cf0dfcb42c92a1d9dbaf70ad9e621f4bd8d98662f00e3c125",
    "aeb6bcfe274b70a14fb067a5e5578264db0fa9b51af5e0ba159158f329e06e77",
    "d37ee418976dd95753c1c73862b9398fa2a2cf9b4ff0fdfe8b30cd95209614b7",
    "4e3bbb1f7b478dcfe71fb631631519a3bca12c9aefca1612bfce4c13a86264d4",
    "76e67dadbcdf1e10e1b74ddc608abd2f98dfb16fbce75277b5232a127f2087ef",
    "ddb89be403809e325750d3d263cd78929c2942b7942a34b77e122c9594a74c8c",
    "5dc9da79a70659a9ad559cb701ded9a2ab9d823aad2f4960cfe370eff4604328"};

std::vector<Digest> ct_leaves() {
  std::vector<Digest> out;
  for (const auto& s : kCtInputs) out.push_back(merkle::leaf_hash(kAlg, as_bytes(s)));
  return out;
}

TEST(MerkleTest, CertificateTransparencyTreeHeads) {
  auto leaves = ct_leaves();
  EXPECT_EQ(merkle::tree_head(kAlg, {}).hex(), hash(kAlg, "").hex());
  for (std::size_t n = 1; n <= 8; ++n)
    EXPECT_EQ(merkle::tree_head(kAlg, std::span(leaves).first(n)).hex(), kCtRoots[n - 1]) << n;
}

TEST(MerkleTest, CertificateTransparencyConsistencyVectors) {
  auto leaves = ct_leaves();
  auto p68 = merkle::prove_consistency(kAlg, leaves, 6);
  ASSERT_EQ(p68.path.size(), 3u);
  EXPECT_EQ(p68.path[0].hex(), "0ebc5d3437fbe2db158b9f126a1d118e308181031d0a949f8dededebc558ef6a");
  EXPECT_EQ(p68.path[1].hex(), "ca854ea128ed050b41b35ffc1b87b8eb2bde461e9e3b5596ece6b9d5975a0ae0");
  EXPECT_EQ(p68.path[2].hex(), "d37ee418976dd95753c1c73862b9398fa2a2cf9b4ff0fdfe8b30cd95209614b7");
  auto p25 = merkle::prove_consistency(kAlg, std::span(leaves).first(5), 2);
  ASSERT_EQ(p25.path.size(), 2u);
  EXPECT_EQ(p25.path[0].hex(), "5f083f0a1a33ca076a95279832580db3e0ef4584bdff1f54c8a360f50de3031e");
  EXPECT_EQ(p25.path[1].hex(), "bc1a0643b12e4d2d7c77918f44e0f4f79a838b6cf9ec5b5c283e1f4d88599e6b");
}

TEST(MerkleTest, TreeHeadMatchesReferenceForSmallTrees) {
  for (std::size_t n = 0; n <= 8; ++n) {
    auto leaves = random_leaves(n, n);
    EXPECT_EQ(merkle::tree_head(kAlg, leaves), ref_mth(leaves)) << n;
  }
  auto l = random_leaves(3, 99);
  EXPECT_EQ(merkle::tree_head(kAlg, l), ref_node(ref_node(l[0], l[1]), l[2]));
}

TEST(MerkleTest, ConsistencyProofsMatchReferenceAndVerify) {
  for (std::size_t n = 1; n <= 64; ++n) {
    auto leaves = random_leaves(n, 1000 + n);
    const Digest new_root = ref_mth(leaves);
    for (std::size_t m = 1; m <= n; ++m) {
      auto proof = merkle::prove_consistency(kAlg, leaves, m);
      ASSERT_EQ(proof.path, ref_subproof(m, leaves, true)) << m << "/" << n;
      ASSERT_LE(proof.path.size(), ceil_log2(n) + 1);
      const Digest old_root = ref_mth(slice(leaves, 0, m));
      ASSERT_TRUE(verify_consistency(kAlg, old_root, new_root, proof)) << m << "/" << n;
    }
  }
}

TEST(MerkleTest, ConsistencyIdentityAndSmallCases) {
  auto leaves = random_leaves(2, 5);
  auto same = merkle::prove_consistency(kAlg, leaves, 2);
  EXPECT_TRUE(same.path.empty());
  const Digest root = merkle::tree_head(kAlg, leaves);
  EXPECT_TRUE(verify_consistency(kAlg, root, root, same));
  EXPECT_FALSE(verify_consistency(kAlg, root, flip(root, 0), same));

  auto p12 = merkle::prove_consistency(kAlg, leaves, 1);
  ASSERT_EQ(p12.path.size(), 1u);
  EXPECT_EQ(p12.path[0], leaves[1]);

  // m a power of two, n = 2m: the proof starts with the right sibling head.
  auto l8 = random_leaves(8, 6);
  auto p48 = merkle::prove_consistency(kAlg, l8, 4);
  ASSERT_EQ(p48.path.size(), 1u);
  EXPECT_EQ(p48.path[0], ref_mth(slice(l8, 4, 8)));
}

TEST(MerkleTest, ConsistencyRejectsBadRanges) {
  auto leaves = random_leaves(4, 7);
  for (std::size_t m : {std::size_t{0}, std::size_t{5}}) {
    try {
      merkle::prove_consistency(kAlg, leaves, m);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kInvalidRange);
    }
  }
  const Digest r = merkle::tree_head(kAlg, leaves);
  EXPECT_FALSE(verify_consistency(kAlg, r, r, ConsistencyProof{0, 4, {}}));
  EXPECT_FALSE(verify_consistency(kAlg, r, r, ConsistencyProof{5, 4, {}}));
}

TEST(MerkleTest, ConsistencyCorruptionSweep) {
  for (std::size_t n = 1; n <= 16; ++n) {
    auto leaves = random_leaves(n, 2000 + n);
    const Digest new_root = merkle::tree_head(kAlg, leaves);
    for (std::size_t m = 1; m <= n; ++m) {
      const Digest old_root = merkle::tree_head(kAlg, std::span(leaves).first(m));
      const auto proof = merkle::prove_consistency(kAlg, leaves, m);
      for (std::size_t b = 0; b < 32; ++b) {
        for (std::uint8_t mask : {std::uint8_t{0x01}, std::uint8_t{0x80}}) {
          ASSERT_FALSE(verify_consistency(kAlg, flip(old_root, b, mask), new_root, proof));
          ASSERT_FALSE(verify_consistency(kAlg, old_root, flip(new_root, b, mask), proof));
          for (std::size_t i = 0; i < proof.path.size(); ++i) {
            auto bad = proof;
            bad.path[i] = flip(bad.path[i], b, mask);
            ASSERT_FALSE(verify_consistency(kAlg, old_root, new_root, bad))
                << m << "/" << n << " elem " << i << " byte " << b;
          }
        }
      }
    }
  }
}

TEST(MerkleTest, InclusionProofsMatchReferenceAndVerify) {
  for (std::size_t n = 1; n <= 64; ++n) {
    auto leaves = random_leaves(n, 3000 + n);
    const Digest root = ref_mth(leaves);
    for (std::size_t i = 0; i < n; ++i) {
      auto proof = merkle::prove_inclusion(kAlg, leaves, i);
      ASSERT_EQ(proof.path, ref_path(i, leaves)) << i << "/" << n;
      ASSERT_LE(proof.path.size(), ceil_log2(n));
      ASSERT_TRUE(merkle::verify_inclusion_leaf(kAlg, root, leaves[i], proof));
      if (n > 1) {
        auto wrong = proof;
        wrong.leaf_index = (i + 1) % n;
        ASSERT_FALSE(merkle::verify_inclusion_leaf(kAlg, root, leaves[i], wrong));
      }
    }
  }
  EXPECT_THROW(merkle::prove_inclusion(kAlg, random_leaves(3, 1), 3), Error);
}

TEST(LedgerTest, BlockHashBindsIndex) {
  Bytes payload{1, 2, 3};
  Bytes pre{0, 0, 0, 0, 0, 0, 0, 5, 1, 2, 3};
  EXPECT_EQ(block_hash(kAlg, 5, payload), hash(kAlg, pre));
  EXPECT_NE(block_hash(kAlg, 0, payload), block_hash(kAlg, 1, payload));
}

TEST(LedgerTest, RootConventions) {
  Ledger l(kAlg, "doc-1");
  EXPECT_EQ(ledger_root(l), hash(kAlg, ""));
  l.append(Bytes{});
  Bytes pre{0x00};
  auto bh = l.blocks()[0].block_hash;
  pre.insert(pre.end(), bh.view().begin(), bh.view().end());
  EXPECT_EQ(ledger_root(l), hash(kAlg, pre));
}

TEST(LedgerTest, SingleLeafInclusion) {
  Ledger l(kAlg, "x");
  l.append(as_bytes("only"));
  auto proof = l.prove_inclusion(0);
  EXPECT_TRUE(proof.path.empty());
  EXPECT_TRUE(verify_inclusion(kAlg, l.root(), l.blocks()[0].block_hash, proof));
  EXPECT_THROW(l.prove_inclusion(1), Error);
}

TEST(LedgerTest, AppendChangesRootAndKeepsPrefix) {
  std::mt19937_64 rng(11);
  Ledger l(kAlg, "grow");
  std::vector<Digest> roots{l.root()};
  for (int i = 0; i < 64; ++i) {
    Ledger next = l.appended(as_bytes(std::to_string(rng())));
    EXPECT_EQ(l.size() + 1, next.size());
    EXPECT_NE(next.root(), l.root());
    l = next;
    roots.push_back(l.root());
  }
  for (std::size_t m = 1; m <= l.size(); ++m) {
    EXPECT_EQ(l.root_at(m), roots[m]);
    for (std::size_t n = m; n <= l.size(); n += 7)
      EXPECT_TRUE(verify_consistency(kAlg, roots[m], roots[n], l.prove_consistency(m, n)));
  }
}

TEST(LedgerTest, ProofSerializationRoundTrip) {
  auto leaves = random_leaves(13, 8);
  for (std::size_t m = 1; m <= 13; ++m) {
    auto p = merkle::prove_consistency(kAlg, leaves, m);
    EXPECT_EQ(ConsistencyProof::parse(p.serialize(), kAlg), p);
  }
  EXPECT_THROW(ConsistencyProof::parse(Bytes(15), kAlg), Error);
  EXPECT_THROW(ConsistencyProof::parse(Bytes(16 + 31), kAlg), Error);
}

TEST(LedgerTest, FileRoundTripBothEncodings) {
  Ledger l(HashAlg::kSha512, "passport/42");
  l.append(Bytes{});
  l.append(as_bytes("hello"));
  l.append(Bytes{0, 255, 7});
  for (bool b64 : {false, true}) {
    std::stringstream ss;
    l.write(ss, b64);
    Ledger back = Ledger::read(ss);
    EXPECT_EQ(back.alg(), HashAlg::kSha512);
    EXPECT_EQ(back.id(), l.id());
    EXPECT_EQ(back.root(), l.root());
  }
  std::stringstream hdr;
  l.write(hdr);
  std::string first;
  std::getline(hdr, first);
  EXPECT_EQ(first, "notary-ledger sha512 hex " + to_hex(l.id()));
  std::stringstream bad("garbage\n");
  EXPECT_THROW(Ledger::read(bad), Error);
}

}  // namespace
}  // namespace notary
