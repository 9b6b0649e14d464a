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

#include "notary/crypto.hpp"

#include <gtest/gtest.h>

#include <random>

namespace notary {
namespace {

TEST(HashTest, Sha256KnownVectors) {
  EXPECT_EQ(hash(HashAlg::kSha256, "").hex(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(hash(HashAlg::kSha256, "abc").hex(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(HashTest, Sha512KnownVectors) {
  EXPECT_EQ(hash(HashAlg::kSha512, "").hex(),
            "cf83e1357eefb8bdf1542850d66d8007d620e4050b5715dc83f4a921d36ce9ce"
            "47d0d13c5d85f2b0ff8318d2877eec2f63b931bd47417a81a538327af927da3e");
  EXPECT_EQ(hash(HashAlg::kSha512, "abc").size(), 64u);
}

TEST(HashTest, DeterministicAndDistinct) {
  EXPECT_EQ(hash(HashAlg::kSha256, "x"), hash(HashAlg::kSha256, "x"));
  EXPECT_NE(hash(HashAlg::kSha256, "a"), hash(HashAlg::kSha256, "b"));
  EXPECT_EQ(hash_concat(HashAlg::kSha256, {as_bytes("ab"), as_bytes("c")}),
            hash(HashAlg::kSha256, "abc"));
}

TEST(DigestTest, ZeroSentinelAndHex) {
  Digest z = Digest::zero(HashAlg::kSha512);
  EXPECT_EQ(z.size(), 64u);
  EXPECT_TRUE(z.is_zero());
  EXPECT_FALSE(hash(HashAlg::kSha256, "").is_zero());
  Digest d = hash(HashAlg::kSha256, "abc");
  EXPECT_EQ(Digest::from_hex(d.hex()), d);
  EXPECT_THROW(Digest::from_hex("abcd"), Error);
  EXPECT_THROW(from_hex("zz"), Error);
}

TEST(Base64Test, RoundTrip) {
  for (std::size_t n = 0; n < 10; ++n) {
    Bytes b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>(i * 37 + 1);
    EXPECT_EQ(from_base64(to_base64(b)), b) << n;
  }
}

Digest key_with_first_byte(std::uint8_t first) {
  Bytes raw(32, 0);
  raw[0] = first;
  return Digest(raw);
}

TEST(LabelTest, BinaryLabelsMsbFirst) {
  Digest key = key_with_first_byte(0b10110000);
  EXPECT_EQ(label_at(key, 0, 2), 1u);
  EXPECT_EQ(label_at(key, 1, 2), 0u);
  EXPECT_EQ(label_at(key, 2, 2), 1u);
  EXPECT_EQ(label_at(key, 3, 2), 1u);
  EXPECT_EQ(label_at(key, 4, 2), 0u);
}

TEST(LabelTest, TwoBitChunks) {
  Digest key = key_with_first_byte(0b10110000);
  EXPECT_EQ(label_at(key, 0, 4), 2u);
  EXPECT_EQ(label_at(key, 1, 4), 3u);
}

TEST(LabelTest, ZeroKey) {
  Digest key = Digest::zero(HashAlg::kSha256);
  for (unsigned r = 2; r <= 256; r *= 2)
    for (std::size_t d = 0; d < max_label_depth(32, r); ++d)
      EXPECT_EQ(label_at(key, d, r), 0u);
}

TEST(LabelTest, ExhaustionAndArityChecks) {
  Digest key = hash(HashAlg::kSha256, "k");
  EXPECT_EQ(max_label_depth(32, 2), 256u);
  EXPECT_EQ(max_label_depth(32, 8), 85u);
  EXPECT_NO_THROW(label_at(key, 255, 2));
  try {
    label_at(key, 256, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kKeyExhausted);
  }
  EXPECT_NO_THROW(label_at(key, 84, 8));
  EXPECT_THROW(label_at(key, 85, 8), Error);
  EXPECT_THROW(label_at(key, 0, 3), Error);
  EXPECT_THROW(label_at(key, 0, 512), Error);
}

// Concatenating labels must reproduce the key's leading bits.
TEST(LabelTest, LabelsReconstructKeyBits) {
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 200; ++iter) {
    HashAlg alg = iter % 2 ? HashAlg::kSha512 : HashAlg::kSha256;
    Digest key = hash(alg, std::to_string(rng()));
    const unsigned r = 1u << (1 + rng() % 8);
    const unsigned bits = label_bits(r);
    const std::size_t depth = max_label_depth(key.size(), r);
    std::vector<bool> rebuilt;
    for (std::size_t d = 0; d < depth; ++d) {
      unsigned l = label_at(key, d, r);
      ASSERT_LT(l, r);
      for (int b = static_cast<int>(bits) - 1; b >= 0; --b) rebuilt.push_back((l >> b) & 1);
    }
    ASSERT_EQ(rebuilt.size(), depth * bits);
    for (std::size_t i = 0; i < rebuilt.size(); ++i)
      ASSERT_EQ(rebuilt[i], bool((key.data()[i / 8] >> (7 - i % 8)) & 1)) << "r=" << r << " bit " << i;
  }
}

}  // namespace
}  // namespace notary
