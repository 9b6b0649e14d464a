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

#include "notary/audit.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <unordered_set>

namespace notary {

namespace {

constexpr char kProofMagic[4] = {'N', 'T', 'A', 'P'};

struct Recorder {
  std::vector<Bytes> nodes;
  std::unordered_set<Digest, DigestHash> seen;
  std::vector<std::pair<std::uint64_t, Bytes>> proofs;
};

void mark(PropertyOutcome& out, AuditStatus status, std::optional<std::uint64_t> round,
          std::string detail) {
  // A failure outranks inconclusive; keep the first of equal severity.
  if (out.status == AuditStatus::kFail) return;
  if (out.status == AuditStatus::kInconclusive && status != AuditStatus::kFail) return;
  out.status = status;
  out.round = round;
  out.detail = std::move(detail);
}

class AuditRun {
 public:
  AuditRun(const TrieParams& params, const Digest& key, const ObjectStore& storage,
           Recorder* recorder)
      : params_(params), key_(key), storage_(storage), recorder_(recorder) {}

  bool storage_problem() const { return storage_problem_; }

  AuditReport run(const std::optional<AuditClaim>& claim,
                  std::span<const Digest> roots) {
    AuditReport report;
    report.chain_height = roots.size();
    report.covered_rounds = roots.size();
    if (claim) report.disclosed_data_match.status = AuditStatus::kPass;
    if (roots.empty()) {
      mark(report.chain_match, AuditStatus::kInconclusive, std::nullopt,
           "no notarization published");
      report.message = "chain is empty";
      return report;
    }

    // Steps 1-3: from the latest published root, search every version and
    // follow the prev_root links back to the first one.
    std::vector<Digest> traversed;
    std::vector<std::optional<Digest>> values;
    bool complete = false;
    Digest current = roots.back();
    while (true) {
      const std::uint64_t round =
          traversed.size() < roots.size() ? roots.size() - 1 - traversed.size() : 0;
      if (traversed.size() == roots.size()) {
        mark(report.chain_match, AuditStatus::kFail, 0,
             "root versions continue past the first published digest");
        complete = true;
        break;
      }
      auto bytes = fetch(current, report.no_alternative_histories, round, "root");
      if (!bytes) break;
      std::optional<Node> root = parse(*bytes, report.no_alternative_histories, round);
      if (!root) break;
      if (!root->is_root()) {
        mark(report.no_alternative_histories, AuditStatus::kFail, round,
             "digest " + current.hex() + " is not a root node");
        break;
      }
      auto value = search(*root, report.no_alternative_histories, round);
      if (!value) break;
      traversed.push_back(current);
      values.push_back(*value);
      if (root->prev_root.is_zero()) {
        complete = true;
        break;
      }
      current = root->prev_root;
    }
    std::reverse(traversed.begin(), traversed.end());
    std::reverse(values.begin(), values.end());
    report.history = values;
    report.id_known = std::any_of(values.begin(), values.end(),
                                  [](const auto& v) { return v.has_value(); });

    if (!complete) {
      const char* why = "history incomplete";
      mark(report.chain_match, AuditStatus::kInconclusive, std::nullopt, why);
      mark(report.no_removal, AuditStatus::kInconclusive, std::nullopt, why);
      mark(report.no_forks, AuditStatus::kInconclusive, std::nullopt, why);
      if (claim)
        mark(report.disclosed_data_match, AuditStatus::kInconclusive, std::nullopt, why);
      return report;
    }

    // Step 4
    check_chain(traversed, roots, report.chain_match);
    // Step 5
    for (std::size_t t = 1; t < values.size(); ++t) {
      if (values[t - 1] && !values[t]) {
        mark(report.no_removal, AuditStatus::kFail, t, "id disappears from the trie");
        break;
      }
    }
    // Step 6
    check_forks(values, report.no_forks);
    // Step 7
    if (claim) check_claim(*claim, values, report.disclosed_data_match);

    if (!report.id_known) report.message = "id " + key_.hex() + " was never notarized";
    return report;
  }

 private:
  std::optional<Bytes> fetch(const Digest& address, PropertyOutcome& out,
                             std::uint64_t round, const char* what) {
    try {
      Bytes bytes = storage_.get(address);
      if (recorder_ && recorder_->seen.insert(address).second)
        recorder_->nodes.push_back(bytes);
      return bytes;
    } catch (const Error& e) {
      storage_problem_ = true;
      if (e.code() == Errc::kIntegrityFailure)
        mark(out, AuditStatus::kFail, round,
             std::string(what) + " " + address.hex() + " does not match its hash reference");
      else
        mark(out, AuditStatus::kInconclusive, round,
             std::string(what) + " " + address.hex() + " unavailable");
      return std::nullopt;
    }
  }

  std::optional<Node> parse(const Bytes& bytes, PropertyOutcome& out,
                            std::uint64_t round) {
    try {
      return parse_node(bytes, params_);
    } catch (const Error& e) {
      mark(out, AuditStatus::kFail, round, std::string("malformed node: ") + e.what());
      return std::nullopt;
    }
  }

  // Value at one version, nullopt-of-nullopt for absence; outer nullopt on
  // a broken path.
  std::optional<std::optional<Digest>> search(const Node& root, PropertyOutcome& out,
                                              std::uint64_t round) {
    Node node = root;
    std::vector<unsigned> labels;
    try {
      for (std::size_t depth = 0;; ++depth) {
        if (node.is_leaf()) {
          for (const Tuple& t : node.tuples)
            for (std::size_t d = 0; d < labels.size(); ++d)
              if (label_at(t.key, d, params_.arity) != labels[d]) {
                mark(out, AuditStatus::kFail, round, "leaf key outside its search prefix");
                return std::nullopt;
              }
          return std::optional<std::optional<Digest>>(node.find(key_));
        }
        const unsigned label = label_at(key_, depth, params_.arity);
        auto child = node.child(label);
        if (!child) return std::optional<std::optional<Digest>>(std::in_place, std::nullopt);
        auto bytes = fetch(*child, out, round, "node");
        if (!bytes) return std::nullopt;
        auto next = parse(*bytes, out, round);
        if (!next) return std::nullopt;
        if (next->is_root()) {
          mark(out, AuditStatus::kFail, round, "root node referenced as a child");
          return std::nullopt;
        }
        node = std::move(*next);
        labels.push_back(label);
      }
    } catch (const Error& e) {
      mark(out, AuditStatus::kFail, round, std::string("search failed: ") + e.what());
      return std::nullopt;
    }
  }

  void check_chain(std::span<const Digest> traversed, std::span<const Digest> roots,
                   PropertyOutcome& out) {
    if (out.status == AuditStatus::kFail) return;
    const std::size_t n = std::min(traversed.size(), roots.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (traversed[i] != roots[i]) {
        mark(out, AuditStatus::kFail, i, "root version differs from the published digest");
        return;
      }
    }
    if (traversed.size() != roots.size())
      mark(out, AuditStatus::kFail, n,
           "found " + std::to_string(traversed.size()) + " root versions, chain has " +
               std::to_string(roots.size()));
  }

  std::optional<ConsistencyProof> fetch_proof(std::uint64_t round, PropertyOutcome& out) {
    auto address = storage_.find_proof(key_, round);
    if (!address) {
      storage_problem_ = true;
      mark(out, AuditStatus::kInconclusive, round, "no consistency proof published");
      return std::nullopt;
    }
    Bytes bytes;
    try {
      bytes = storage_.get(*address);
    } catch (const Error& e) {
      storage_problem_ = true;
      if (e.code() == Errc::kIntegrityFailure)
        mark(out, AuditStatus::kFail, round, "stored consistency proof is corrupted");
      else
        mark(out, AuditStatus::kInconclusive, round, "consistency proof unavailable");
      return std::nullopt;
    }
    if (recorder_) recorder_->proofs.emplace_back(round, bytes);
    try {
      return ConsistencyProof::parse(bytes, params_.alg);
    } catch (const Error&) {
      mark(out, AuditStatus::kFail, round, "malformed consistency proof");
      return std::nullopt;
    }
  }

  void check_forks(std::span<const std::optional<Digest>> values, PropertyOutcome& out) {
    const Digest empty_root = hash(params_.alg, ByteView{});
    // Tree size reached by the previous proof, when known.
    std::uint64_t last_size = 0;
    bool size_known = false;
    for (std::size_t t = 1; t < values.size(); ++t) {
      if (!values[t - 1] || !values[t] || *values[t - 1] == *values[t]) continue;
      // Any ledger extends the empty one; there is nothing to prove.
      if (*values[t - 1] == empty_root) {
        size_known = false;
        continue;
      }
      auto proof = fetch_proof(t, out);
      if (!proof) {
        if (out.status == AuditStatus::kFail) return;
        // The size reached at this round is unknown.
        size_known = false;
        continue;
      }
      if (!verify_consistency(params_.alg, *values[t - 1], *values[t], *proof)) {
        mark(out, AuditStatus::kFail, t, "value change is not a consistent extension");
        return;
      }
      if (size_known && proof->old_size != last_size) {
        mark(out, AuditStatus::kFail, t, "proof sizes do not chain with the previous proof");
        return;
      }
      last_size = proof->new_size;
      size_known = true;
    }
  }

  void check_claim(const AuditClaim& claim, std::span<const std::optional<Digest>> values,
                   PropertyOutcome& out) {
    for (const auto& v : values)
      if (v && *v == claim.digest) return;
    if (!claim.from_previous) {
      mark(out, AuditStatus::kFail, std::nullopt, "shared digest matches no notarized value");
      return;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i] ||
          !verify_consistency(params_.alg, *values[i], claim.digest, *claim.from_previous))
        continue;
      std::optional<Digest> next;
      for (std::size_t j = i + 1; j < values.size(); ++j)
        if (values[j] && *values[j] != *values[i]) {
          next = values[j];
          break;
        }
      if (!next) return;
      if (claim.to_next &&
          verify_consistency(params_.alg, claim.digest, *next, *claim.to_next))
        return;
      mark(out, AuditStatus::kFail, i,
           "shared digest is not consistent with the next notarized value");
      return;
    }
    mark(out, AuditStatus::kFail, std::nullopt,
         "shared digest extends no notarized value");
  }

  TrieParams params_;
  Digest key_;
  const ObjectStore& storage_;
  Recorder* recorder_;
  bool storage_problem_ = false;
};

void put_le(Bytes& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}
  std::uint64_t le(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
      v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  ByteView take(std::size_t n) {
    need(n);
    ByteView out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(Errc::kParse, "audit proof truncated");
  }
  ByteView data_;
  std::size_t pos_ = 0;
};

void append_section(Bytes& out, const Bytes& section) {
  put_le(out, section.size(), 4);
  out.insert(out.end(), section.begin(), section.end());
}

}  // namespace

std::string_view audit_status_name(AuditStatus status) {
  switch (status) {
    case AuditStatus::kPass: return "pass";
    case AuditStatus::kFail: return "fail";
    case AuditStatus::kInconclusive: return "inconclusive";
    case AuditStatus::kNotChecked: return "not-checked";
  }
  return "unknown";
}

AuditStatus AuditReport::verdict() const {
  const PropertyOutcome* all[] = {&no_alternative_histories, &no_removal, &no_forks,
                                  &chain_match, &disclosed_data_match, &bundle};
  bool inconclusive = !id_known;
  for (const PropertyOutcome* p : all) {
    if (p->status == AuditStatus::kFail) return AuditStatus::kFail;
    if (p->status == AuditStatus::kInconclusive) inconclusive = true;
  }
  return inconclusive ? AuditStatus::kInconclusive : AuditStatus::kPass;
}

int AuditReport::exit_code() const {
  switch (verdict()) {
    case AuditStatus::kPass: return 0;
    case AuditStatus::kFail: return 1;
    default: return 2;
  }
}

std::string AuditReport::to_text() const {
  std::ostringstream out;
  auto line = [&](const char* name, const PropertyOutcome& p) {
    out << name << ": " << audit_status_name(p.status);
    if (p.round) out << " (round " << *p.round << ")";
    if (!p.detail.empty()) out << " - " << p.detail;
    out << '\n';
  };
  line("no_alternative_histories", no_alternative_histories);
  line("no_removal", no_removal);
  line("no_forks", no_forks);
  line("chain_match", chain_match);
  line("disclosed_data_match", disclosed_data_match);
  if (bundle.status != AuditStatus::kNotChecked) line("audit_proof", bundle);
  out << "rounds covered: " << covered_rounds << " of " << chain_height << '\n';
  if (not_covered_from)
    out << "rounds " << *not_covered_from << ".." << chain_height - 1
        << ": not covered by this audit proof\n";
  for (std::size_t t = 0; t < history.size(); ++t)
    out << "  round " << t << ": " << (history[t] ? history[t]->hex() : "null") << '\n';
  if (!message.empty()) out << message << '\n';
  out << "verdict: " << audit_status_name(verdict()) << '\n';
  return out.str();
}

AuditReport audit_ledger(const TrieParams& params, ByteView id,
                         const std::optional<AuditClaim>& claim,
                         std::span<const Digest> chain_roots,
                         const ObjectStore& storage) {
  params.validate();
  AuditRun run(params, hash(params.alg, id), storage, nullptr);
  return run.run(claim, chain_roots);
}

Bytes AuditProof::serialize() const {
  Bytes header;
  header.push_back(static_cast<std::uint8_t>(alg));
  put_le(header, arity, 2);
  put_le(header, up_to_round, 8);
  header.insert(header.end(), id_key.view().begin(), id_key.view().end());

  Bytes node_section;
  for (const Bytes& n : nodes) {
    put_le(node_section, n.size(), 4);
    node_section.insert(node_section.end(), n.begin(), n.end());
  }
  Bytes proof_section;
  for (const auto& [round, p] : proofs) {
    put_le(proof_section, round, 8);
    put_le(proof_section, p.size(), 4);
    proof_section.insert(proof_section.end(), p.begin(), p.end());
  }

  Bytes out(std::begin(kProofMagic), std::end(kProofMagic));
  append_section(out, header);
  append_section(out, node_section);
  append_section(out, proof_section);
  return out;
}

AuditProof AuditProof::parse(ByteView bytes) {
  Reader in(bytes);
  ByteView magic = in.take(4);
  if (std::memcmp(magic.data(), kProofMagic, 4) != 0)
    throw Error(Errc::kParse, "not an audit proof");

  AuditProof proof;
  Reader header(in.take(in.le(4)));
  const auto alg = header.le(1);
  if (alg != static_cast<std::uint8_t>(HashAlg::kSha256) &&
      alg != static_cast<std::uint8_t>(HashAlg::kSha512))
    throw Error(Errc::kParse, "unknown hash algorithm in audit proof");
  proof.alg = static_cast<HashAlg>(alg);
  proof.arity = static_cast<unsigned>(header.le(2));
  if (!is_valid_arity(proof.arity)) throw Error(Errc::kParse, "invalid arity in audit proof");
  proof.up_to_round = header.le(8);
  proof.id_key = Digest(header.take(digest_size(proof.alg)));
  if (!header.done()) throw Error(Errc::kParse, "oversized audit proof header");

  Reader nodes(in.take(in.le(4)));
  while (!nodes.done()) {
    ByteView n = nodes.take(nodes.le(4));
    proof.nodes.emplace_back(n.begin(), n.end());
  }
  Reader proofs(in.take(in.le(4)));
  while (!proofs.done()) {
    const std::uint64_t round = proofs.le(8);
    ByteView p = proofs.take(proofs.le(4));
    proof.proofs.emplace_back(round, Bytes(p.begin(), p.end()));
  }
  if (!in.done()) throw Error(Errc::kParse, "trailing bytes after audit proof");
  return proof;
}

AuditProof make_audit_proof(const TrieParams& params, ByteView id,
                            std::uint64_t up_to_round,
                            std::span<const Digest> chain_roots,
                            const ObjectStore& storage) {
  params.validate();
  if (up_to_round >= chain_roots.size())
    throw Error(Errc::kInvalidRange, "round " + std::to_string(up_to_round) +
                                         " not published yet");
  const Digest key = hash(params.alg, id);
  Recorder recorder;
  AuditRun run(params, key, storage, &recorder);
  AuditReport report = run.run(std::nullopt, chain_roots.first(up_to_round + 1));
  if (run.storage_problem())
    throw Error(Errc::kCannotConstruct,
                "public storage is missing or corrupting data for " + to_hex(id));
  AuditProof proof;
  proof.alg = params.alg;
  proof.arity = params.arity;
  proof.id_key = key;
  proof.up_to_round = up_to_round;
  proof.nodes = std::move(recorder.nodes);
  proof.proofs = std::move(recorder.proofs);
  return proof;
}

AuditReport verify_audit_proof(const AuditProof& proof, ByteView id,
                               std::span<const Digest> chain_roots,
                               const std::optional<AuditClaim>& claim) {
  AuditReport report;
  report.chain_height = chain_roots.size();
  report.covered_rounds = proof.up_to_round + 1;
  if (hash(proof.alg, id) != proof.id_key) {
    mark(report.bundle, AuditStatus::kFail, std::nullopt, "audit proof is for another id");
    return report;
  }
  if (chain_roots.size() <= proof.up_to_round) {
    mark(report.chain_match, AuditStatus::kInconclusive, std::nullopt,
         "chain is shorter than the audit proof's scope");
    return report;
  }

  // k is not carried by the bundle; accept any leaf size the format allows.
  const TrieParams params{proof.arity, 256, proof.alg};
  MemoryStore bundle(proof.alg);
  for (const Bytes& n : proof.nodes) bundle.put(n);
  for (const auto& [round, p] : proof.proofs) {
    try {
      bundle.index_proof({proof.id_key, round, bundle.put(p)});
    } catch (const Error&) {
      mark(report.bundle, AuditStatus::kFail, round, "two proofs for one round");
      return report;
    }
  }

  Recorder used;
  AuditRun run(params, proof.id_key, bundle, &used);
  AuditReport result = run.run(claim, chain_roots.first(proof.up_to_round + 1));
  result.chain_height = chain_roots.size();
  result.covered_rounds = proof.up_to_round + 1;
  if (chain_roots.size() > proof.up_to_round + 1)
    result.not_covered_from = proof.up_to_round + 1;

  // A well-formed bundle holds exactly what the audit reads.
  result.bundle.status = AuditStatus::kPass;
  if (used.nodes.size() != proof.nodes.size() || used.proofs.size() != proof.proofs.size())
    mark(result.bundle, AuditStatus::kFail, std::nullopt,
         "audit proof carries data the audit does not use");
  return result;
}

AuditReport verify_audit_proof_bytes(ByteView bundle, ByteView id,
                                     std::span<const Digest> chain_roots,
                                     const std::optional<AuditClaim>& claim) {
  AuditProof proof;
  try {
    proof = AuditProof::parse(bundle);
  } catch (const Error& e) {
    AuditReport report;
    report.chain_height = chain_roots.size();
    mark(report.bundle, AuditStatus::kInconclusive, std::nullopt,
         std::string("unreadable audit proof: ") + e.what());
    return report;
  }
  return verify_audit_proof(proof, id, chain_roots, claim);
}

}  // namespace notary
