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
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "notary/crypto.hpp"

namespace notary {

// Upper bound on digest + note per record, from the 1 kB transaction note
// field of the public chain this journal stands in for.
inline constexpr std::size_t kMaxRecordPayload = 1024;

struct NotarizationRecord {
  std::uint64_t seq = 0;
  Digest trie_root;
  Bytes note;

  friend bool operator==(const NotarizationRecord&,
                         const NotarizationRecord&) = default;
};

// "<seq> <hex root> <hex note>\n"; the note field may be empty, leaving a
// trailing space.
std::string format_record(const NotarizationRecord& record);
NotarizationRecord parse_record(std::string_view line);

// Append-only journal of notarization records. File-backed when
// constructed with a path, in-memory otherwise.
class Chain {
 public:
  Chain() = default;
  explicit Chain(std::filesystem::path journal);

  // Throws kNonContiguousSeq or kOversizeNote.
  std::uint64_t publish(const NotarizationRecord& record);

  std::uint64_t height() const;
  std::vector<Digest> read_roots() const;
  std::vector<NotarizationRecord> records() const;
  const std::optional<std::filesystem::path>& path() const { return path_; }

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mu_;
  std::vector<NotarizationRecord> records_;
};

}  // namespace notary
