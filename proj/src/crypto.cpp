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

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <bit>
#include <cstring>

namespace notary {

std::string_view hash_alg_name(HashAlg alg) {
  return alg == HashAlg::kSha512 ? "sha512" : "sha256";
}

HashAlg parse_hash_alg(std::string_view name) {
  if (name == "sha256" || name == "SHA-256") return HashAlg::kSha256;
  if (name == "sha512" || name == "SHA-512") return HashAlg::kSha512;
  throw Error(Errc::kInvalidArgument,
              "unknown hash algorithm '" + std::string(name) + "'");
}

Digest::Digest(ByteView bytes) {
  if (bytes.size() != 32 && bytes.size() != 64)
    throw Error(Errc::kInvalidArgument,
                "digest must be 32 or 64 bytes, got " +
                    std::to_string(bytes.size()));
  std::copy(bytes.begin(), bytes.end(), bytes_.begin());
  size_ = static_cast<std::uint8_t>(bytes.size());
}

Digest Digest::zero(HashAlg alg) {
  Digest d;
  d.size_ = static_cast<std::uint8_t>(digest_size(alg));
  return d;
}

Digest Digest::from_hex(std::string_view hex) {
  Bytes raw = notary::from_hex(hex);
  return Digest(raw);
}

bool Digest::is_zero() const {
  return std::all_of(bytes_.begin(), bytes_.begin() + size_,
                     [](std::uint8_t b) { return b == 0; });
}

std::string Digest::hex() const { return to_hex(view()); }

Digest hash(HashAlg alg, ByteView data) {
  Digest out = Digest::zero(alg);
  if (alg == HashAlg::kSha512)
    SHA512(data.data(), data.size(), out.data());
  else
    SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest hash_concat(HashAlg alg, std::initializer_list<ByteView> parts) {
  std::size_t total = 0;
  for (auto p : parts) total += p.size();
  // Node and Merkle preimages are small; keep them on the stack.
  std::array<std::uint8_t, 1024> stack_buf;
  Bytes heap_buf;
  std::uint8_t* buf = stack_buf.data();
  if (total > stack_buf.size()) {
    heap_buf.resize(total);
    buf = heap_buf.data();
  }
  std::size_t off = 0;
  for (auto p : parts) {
    if (!p.empty()) std::memcpy(buf + off, p.data(), p.size());
    off += p.size();
  }
  return hash(alg, ByteView(buf, total));
}

bool is_valid_arity(unsigned arity) {
  return arity >= 2 && arity <= 256 && std::has_single_bit(arity);
}

unsigned label_bits(unsigned arity) {
  if (!is_valid_arity(arity))
    throw Error(Errc::kInvalidArgument,
                "arity must be a power of two in [2, 256], got " +
                    std::to_string(arity));
  return static_cast<unsigned>(std::countr_zero(arity));
}

std::size_t max_label_depth(std::size_t key_bytes, unsigned arity) {
  return key_bytes * 8 / label_bits(arity);
}

unsigned label_at(const Digest& key, std::size_t depth, unsigned arity) {
  const unsigned bits = label_bits(arity);
  const std::size_t offset = depth * bits;
  const std::size_t key_bits = key.size() * 8;
  if (offset + bits > key_bits)
    throw Error(Errc::kKeyExhausted,
                "no label at depth " + std::to_string(depth));
  const std::size_t byte = offset / 8;
  const unsigned shift = static_cast<unsigned>(offset % 8);
  // A label spans at most two bytes.
  unsigned window = static_cast<unsigned>(key.data()[byte]) << 8;
  if (byte + 1 < key.size()) window |= key.data()[byte + 1];
  return (window >> (16 - shift - bits)) & ((1u << bits) - 1);
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0)
    throw Error(Errc::kParse, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::kParse, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::string to_base64(ByteView bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Bytes from_base64(std::string_view text) {
  if (text.size() % 4 != 0) throw Error(Errc::kParse, "invalid base64 length");
  Bytes out(3 * text.size() / 4);
  int n = EVP_DecodeBlock(out.data(),
                          reinterpret_cast<const unsigned char*>(text.data()),
                          static_cast<int>(text.size()));
  if (n < 0) throw Error(Errc::kParse, "invalid base64");
  // EVP_DecodeBlock keeps the padding bytes as zeros.
  std::size_t len = static_cast<std::size_t>(n);
  if (!text.empty() && text.back() == '=') --len;
  if (text.size() >= 2 && text[text.size() - 2] == '=') --len;
  out.resize(len);
  return out;
}

}  // namespace notary
