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

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>

#include "notary/error.hpp"

namespace notary {

enum class HashAlg : std::uint8_t { kSha256 = 1, kSha512 = 2 };

constexpr std::size_t digest_size(HashAlg alg) {
  return alg == HashAlg::kSha512 ? 64 : 32;
}

std::string_view hash_alg_name(HashAlg alg);  // "sha256" / "sha512"
HashAlg parse_hash_alg(std::string_view name);

// Fixed-length hash output. Length is 32 or 64 bytes depending on the
// algorithm; the all-zero value is the "no previous root" sentinel.
class Digest {
 public:
  static constexpr std::size_t kMaxSize = 64;

  Digest() = default;
  Digest(ByteView bytes);

  static Digest zero(HashAlg alg);
  static Digest from_hex(std::string_view hex);

  std::size_t size() const { return size_; }
  const std::uint8_t* data() const { return bytes_.data(); }
  std::uint8_t* data() { return bytes_.data(); }
  ByteView view() const { return {bytes_.data(), size_}; }
  bool empty() const { return size_ == 0; }
  bool is_zero() const;

  std::string hex() const;

  friend bool operator==(const Digest& a, const Digest& b) {
    return a.size_ == b.size_ &&
           std::equal(a.bytes_.begin(), a.bytes_.begin() + a.size_,
                      b.bytes_.begin());
  }
  friend std::strong_ordering operator<=>(const Digest& a, const Digest& b) {
    return std::lexicographical_compare_three_way(
        a.bytes_.begin(), a.bytes_.begin() + a.size_, b.bytes_.begin(),
        b.bytes_.begin() + b.size_);
  }

 private:
  std::array<std::uint8_t, kMaxSize> bytes_{};
  std::uint8_t size_ = 0;
};

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < std::min<std::size_t>(d.size(), 8); ++i)
      h = (h << 8) | d.data()[i];
    return h;
  }
};

Digest hash(HashAlg alg, ByteView data);
inline Digest hash(HashAlg alg, std::string_view data) {
  return hash(alg, as_bytes(data));
}
// Hash of the concatenation of all parts.
Digest hash_concat(HashAlg alg, std::initializer_list<ByteView> parts);

// Number of key bits consumed per trie edge; r must be a power of two in
// [2, 256].
unsigned label_bits(unsigned arity);
bool is_valid_arity(unsigned arity);

// Edge label of `key` at `depth`: log2(r) bits starting at bit
// depth*log2(r), most significant bit first. Throws kKeyExhausted when the
// key has no bits left at that depth.
unsigned label_at(const Digest& key, std::size_t depth, unsigned arity);

// Number of full labels a key of `key_bytes` bytes provides.
std::size_t max_label_depth(std::size_t key_bytes, unsigned arity);

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);
std::string to_base64(ByteView bytes);
Bytes from_base64(std::string_view text);

}  // namespace notary

template <>
struct std::hash<notary::Digest> : notary::DigestHash {};
