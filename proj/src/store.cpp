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

#include "notary/store.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

namespace notary {

namespace fs = std::filesystem;

std::string format_index_line(const ProofIndexEntry& entry) {
  return entry.ledger_key.hex() + ' ' + std::to_string(entry.round) + ' ' +
         entry.proof_address.hex() + '\n';
}

ProofIndexEntry parse_index_line(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  auto sp1 = line.find(' ');
  auto sp2 = sp1 == std::string_view::npos ? sp1 : line.find(' ', sp1 + 1);
  if (sp2 == std::string_view::npos)
    throw Error(Errc::kParse, "malformed proof index line");
  ProofIndexEntry e;
  e.ledger_key = Digest::from_hex(line.substr(0, sp1));
  auto round = line.substr(sp1 + 1, sp2 - sp1 - 1);
  auto [ptr, ec] =
      std::from_chars(round.data(), round.data() + round.size(), e.round);
  if (ec != std::errc{} || ptr != round.data() + round.size())
    throw Error(Errc::kParse, "bad round in proof index");
  e.proof_address = Digest::from_hex(line.substr(sp2 + 1));
  return e;
}

namespace {

void check_index_insert(
    const std::map<std::pair<Digest, std::uint64_t>, Digest>& index,
    const ProofIndexEntry& entry, bool& already_present) {
  already_present = false;
  auto it = index.find({entry.ledger_key, entry.round});
  if (it == index.end()) return;
  if (it->second != entry.proof_address)
    throw Error(Errc::kConflict, "proof for ledger " + entry.ledger_key.hex() +
                                     " round " + std::to_string(entry.round) +
                                     " already registered");
  already_present = true;
}

}  // namespace

// --- MemoryStore ----------------------------------------------------------

Digest MemoryStore::put(ByteView content) {
  Digest address = hash(alg_, content);
  std::unique_lock lock(mu_);
  objects_.try_emplace(address, content.begin(), content.end());
  return address;
}

Bytes MemoryStore::get(const Digest& address) const {
  Bytes content;
  {
    std::shared_lock lock(mu_);
    auto it = objects_.find(address);
    if (it == objects_.end())
      throw Error(Errc::kNotFound, "object " + address.hex());
    content = it->second;
  }
  if (hash(alg_, content) != address)
    throw Error(Errc::kIntegrityFailure, "object " + address.hex());
  return content;
}

bool MemoryStore::contains(const Digest& address) const {
  std::shared_lock lock(mu_);
  return objects_.contains(address);
}

std::size_t MemoryStore::object_count() const {
  std::shared_lock lock(mu_);
  return objects_.size();
}

void MemoryStore::index_proof(const ProofIndexEntry& entry) {
  std::unique_lock lock(mu_);
  bool present = false;
  check_index_insert(index_, entry, present);
  if (present) return;
  index_.emplace(std::pair{entry.ledger_key, entry.round}, entry.proof_address);
  index_order_.push_back(entry);
}

std::optional<Digest> MemoryStore::find_proof(const Digest& ledger_key,
                                              std::uint64_t round) const {
  std::shared_lock lock(mu_);
  auto it = index_.find({ledger_key, round});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<ProofIndexEntry> MemoryStore::proof_entries() const {
  std::shared_lock lock(mu_);
  return index_order_;
}

void MemoryStore::replace_raw(const Digest& address, Bytes content) {
  std::unique_lock lock(mu_);
  objects_[address] = std::move(content);
}

void MemoryStore::override_proof(const ProofIndexEntry& entry) {
  std::unique_lock lock(mu_);
  auto [it, inserted] =
      index_.insert_or_assign(std::pair{entry.ledger_key, entry.round}, entry.proof_address);
  for (auto& e : index_order_)
    if (e.ledger_key == entry.ledger_key && e.round == entry.round) e = entry;
  if (inserted) index_order_.push_back(entry);
}

// --- DirectoryStore -------------------------------------------------------

DirectoryStore::DirectoryStore(fs::path root, HashAlg alg)
    : root_(std::move(root)), alg_(alg) {
  std::error_code ec;
  fs::create_directories(root_ / "objects", ec);
  if (ec) throw Error(Errc::kIo, "cannot create " + root_.string() + ": " + ec.message());
  load_index();
}

fs::path DirectoryStore::object_path(const Digest& address) const {
  std::string hex = address.hex();
  return root_ / "objects" / hex.substr(0, 2) / hex.substr(2);
}

Digest DirectoryStore::put(ByteView content) {
  Digest address = hash(alg_, content);
  fs::path path = object_path(address);
  std::error_code ec;
  if (fs::exists(path, ec)) return address;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(Errc::kIo, "cannot create " + path.parent_path().string());

  // Write to a unique temporary name, then rename; concurrent writers of
  // the same content converge on one file.
  static std::atomic<std::uint64_t> counter{0};
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp."
           << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.'
           << counter.fetch_add(1);
  fs::path tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(content.data()),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::kIo, "write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::kIo, "rename failed: " + path.string());
  }
  return address;
}

Bytes DirectoryStore::get(const Digest& address) const {
  fs::path path = object_path(address);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kNotFound, "object " + address.hex());
  Bytes content((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  if (hash(alg_, content) != address)
    throw Error(Errc::kIntegrityFailure, "object " + address.hex());
  return content;
}

bool DirectoryStore::contains(const Digest& address) const {
  std::error_code ec;
  return fs::exists(object_path(address), ec);
}

std::size_t DirectoryStore::object_count() const {
  std::size_t n = 0;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root_ / "objects", ec);
       it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_regular_file() &&
        it->path().filename().string().find(".tmp.") == std::string::npos)
      ++n;
  }
  return n;
}

void DirectoryStore::load_index() {
  std::ifstream in(root_ / "proofs.idx");
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ProofIndexEntry e = parse_index_line(line);
    bool present = false;
    check_index_insert(index_, e, present);
    if (present) continue;
    index_.emplace(std::pair{e.ledger_key, e.round}, e.proof_address);
    index_order_.push_back(e);
  }
}

void DirectoryStore::index_proof(const ProofIndexEntry& entry) {
  std::unique_lock lock(mu_);
  bool present = false;
  check_index_insert(index_, entry, present);
  if (present) return;
  std::ofstream out(root_ / "proofs.idx", std::ios::app | std::ios::binary);
  out << format_index_line(entry);
  if (!out) throw Error(Errc::kIo, "cannot append to proofs.idx");
  index_.emplace(std::pair{entry.ledger_key, entry.round}, entry.proof_address);
  index_order_.push_back(entry);
}

void DirectoryStore::replace_raw(const Digest& address, Bytes content) {
  fs::path path = object_path(address);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(content.data()),
            static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::kIo, "cannot overwrite " + path.string());
}

void DirectoryStore::override_proof(const ProofIndexEntry& entry) {
  std::unique_lock lock(mu_);
  auto [it, inserted] =
      index_.insert_or_assign(std::pair{entry.ledger_key, entry.round}, entry.proof_address);
  for (auto& e : index_order_)
    if (e.ledger_key == entry.ledger_key && e.round == entry.round) e = entry;
  if (inserted) index_order_.push_back(entry);
  std::ofstream out(root_ / "proofs.idx", std::ios::trunc | std::ios::binary);
  for (const auto& e : index_order_) out << format_index_line(e);
  if (!out) throw Error(Errc::kIo, "cannot rewrite proofs.idx");
}

std::optional<Digest> DirectoryStore::find_proof(const Digest& ledger_key,
                                                 std::uint64_t round) const {
  std::shared_lock lock(mu_);
  auto it = index_.find({ledger_key, round});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<ProofIndexEntry> DirectoryStore::proof_entries() const {
  std::shared_lock lock(mu_);
  return index_order_;
}

}  // namespace notary
