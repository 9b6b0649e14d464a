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
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "notary/crypto.hpp"

namespace notary {

struct ProofIndexEntry {
  Digest ledger_key;
  std::uint64_t round = 0;
  Digest proof_address;

  friend bool operator==(const ProofIndexEntry&, const ProofIndexEntry&) = default;
};

// Content-addressed, append-only object storage. Every read is checked
// against its address; nothing is trusted from the backing medium.
class ObjectStore {
 public:
  virtual ~ObjectStore() = default;

  virtual HashAlg alg() const = 0;

  // Idempotent; returns hash(content).
  virtual Digest put(ByteView content) = 0;
  // Throws kNotFound or kIntegrityFailure.
  virtual Bytes get(const Digest& address) const = 0;
  virtual bool contains(const Digest& address) const = 0;
  virtual std::size_t object_count() const = 0;

  // Throws kConflict if (ledger, round) is already bound to another address.
  virtual void index_proof(const ProofIndexEntry& entry) = 0;
  virtual std::optional<Digest> find_proof(const Digest& ledger_key,
                                           std::uint64_t round) const = 0;
  // Entries in registration order.
  virtual std::vector<ProofIndexEntry> proof_entries() const = 0;

  // Fault-injection hooks. They break the store's invariants on purpose
  // and exist so tests and the CLI can simulate a dishonest publisher.
  virtual void replace_raw(const Digest& address, Bytes content) = 0;
  virtual void override_proof(const ProofIndexEntry& entry) = 0;
};

class MemoryStore final : public ObjectStore {
 public:
  explicit MemoryStore(HashAlg alg = HashAlg::kSha256) : alg_(alg) {}

  HashAlg alg() const override { return alg_; }
  Digest put(ByteView content) override;
  Bytes get(const Digest& address) const override;
  bool contains(const Digest& address) const override;
  std::size_t object_count() const override;

  void index_proof(const ProofIndexEntry& entry) override;
  std::optional<Digest> find_proof(const Digest& ledger_key,
                                   std::uint64_t round) const override;
  std::vector<ProofIndexEntry> proof_entries() const override;

  void replace_raw(const Digest& address, Bytes content) override;
  void override_proof(const ProofIndexEntry& entry) override;

 private:
  HashAlg alg_;
  mutable std::shared_mutex mu_;
  std::unordered_map<Digest, Bytes, DigestHash> objects_;
  std::map<std::pair<Digest, std::uint64_t>, Digest> index_;
  std::vector<ProofIndexEntry> index_order_;
};

// Directory layout:
//   <root>/objects/<first 2 hex>/<remaining hex>
//   <root>/proofs.idx   "<hex ledger key> <decimal round> <hex address>\n"
class DirectoryStore final : public ObjectStore {
 public:
  DirectoryStore(std::filesystem::path root, HashAlg alg);

  HashAlg alg() const override { return alg_; }
  Digest put(ByteView content) override;
  Bytes get(const Digest& address) const override;
  bool contains(const Digest& address) const override;
  std::size_t object_count() const override;

  void index_proof(const ProofIndexEntry& entry) override;
  std::optional<Digest> find_proof(const Digest& ledger_key,
                                   std::uint64_t round) const override;
  std::vector<ProofIndexEntry> proof_entries() const override;

  void replace_raw(const Digest& address, Bytes content) override;
  void override_proof(const ProofIndexEntry& entry) override;

  std::filesystem::path object_path(const Digest& address) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  void load_index();

  std::filesystem::path root_;
  HashAlg alg_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<Digest, std::uint64_t>, Digest> index_;
  std::vector<ProofIndexEntry> index_order_;
};

std::string format_index_line(const ProofIndexEntry& entry);
ProofIndexEntry parse_index_line(std::string_view line);

}  // namespace notary
