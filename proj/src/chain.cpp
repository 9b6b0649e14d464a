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

#include "notary/chain.hpp"

#include <charconv>
#include <fstream>

namespace notary {

std::string format_record(const NotarizationRecord& record) {
  return std::to_string(record.seq) + ' ' + record.trie_root.hex() + ' ' +
         to_hex(record.note) + '\n';
}

NotarizationRecord parse_record(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  auto sp1 = line.find(' ');
  auto sp2 = sp1 == std::string_view::npos ? sp1 : line.find(' ', sp1 + 1);
  if (sp2 == std::string_view::npos)
    throw Error(Errc::kParse, "malformed chain record");
  NotarizationRecord r;
  auto seq = line.substr(0, sp1);
  auto [ptr, ec] = std::from_chars(seq.data(), seq.data() + seq.size(), r.seq);
  if (ec != std::errc{} || ptr != seq.data() + seq.size())
    throw Error(Errc::kParse, "bad sequence number in chain record");
  r.trie_root = Digest::from_hex(line.substr(sp1 + 1, sp2 - sp1 - 1));
  r.note = from_hex(line.substr(sp2 + 1));
  return r;
}

Chain::Chain(std::filesystem::path journal) : path_(std::move(journal)) {
  std::ifstream in(*path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    NotarizationRecord r = parse_record(line);
    if (r.seq != records_.size())
      throw Error(Errc::kNonContiguousSeq,
                  "journal record " + std::to_string(r.seq) + " at position " +
                      std::to_string(records_.size()));
    records_.push_back(std::move(r));
  }
}

std::uint64_t Chain::publish(const NotarizationRecord& record) {
  std::lock_guard lock(mu_);
  if (record.seq != records_.size())
    throw Error(Errc::kNonContiguousSeq,
                "expected seq " + std::to_string(records_.size()) + ", got " +
                    std::to_string(record.seq));
  const std::size_t payload = record.trie_root.size() + record.note.size();
  if (payload > kMaxRecordPayload)
    throw Error(Errc::kOversizeNote,
                "record payload " + std::to_string(payload) + " bytes exceeds " +
                    std::to_string(kMaxRecordPayload));
  if (path_) {
    std::ofstream out(*path_, std::ios::app | std::ios::binary);
    out << format_record(record);
    out.flush();
    if (!out) throw Error(Errc::kIo, "cannot append to " + path_->string());
  }
  records_.push_back(record);
  return record.seq;
}

std::uint64_t Chain::height() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::vector<Digest> Chain::read_roots() const {
  std::lock_guard lock(mu_);
  std::vector<Digest> roots;
  roots.reserve(records_.size());
  for (const auto& r : records_) roots.push_back(r.trie_root);
  return roots;
}

std::vector<NotarizationRecord> Chain::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

}  // namespace notary
