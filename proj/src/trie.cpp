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

#include "notary/trie.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

namespace notary {

namespace {

unsigned ceil_log2(unsigned k) {
  return k <= 1 ? 0 : static_cast<unsigned>(std::bit_width(k - 1));
}

void check_digest(const Digest& d, const TrieParams& params, const char* what) {
  if (d.size() != digest_size(params.alg))
    throw Error(Errc::kCanonicalization,
                std::string(what) + " has wrong digest length");
}

Node fetch_node(const ObjectStore& store, const Digest& address,
                const TrieParams& params) {
  Bytes bytes;
  try {
    bytes = store.get(address);
  } catch (const Error& e) {
    if (e.code() == Errc::kNotFound)
      throw Error(Errc::kMissingNode, "trie node " + address.hex());
    throw;
  }
  return parse_node(bytes, params);
}

const ObjectStore& store_of(const TrieVersion& v) {
  if (v.store == nullptr)
    throw Error(Errc::kInvalidArgument, "trie version has no store");
  return *v.store;
}

// Shared by stats() and measure_build().
class Accumulator {
 public:
  explicit Accumulator(const TrieParams& params) : params_(params) {}

  void add(const Node& node, std::size_t bytes, std::size_t depth,
           std::uint64_t keys_below) {
    ++m_.nodes_count;
    m_.total_size_bytes += bytes;
    m_.total_size_paper_bits += paper_bits(node, params_);
    path_bytes_ += static_cast<long double>(bytes) * keys_below;
    if (node.is_leaf()) {
      const std::uint64_t len = depth + 1;
      const std::uint64_t n = node.tuples.size();
      m_.keys += n;
      path_len_sum_ += len * n;
      min_ = std::min(min_, len);
      max_ = std::max(max_, len);
    }
  }

  Measurements finish() const {
    Measurements out = m_;
    if (out.keys > 0) {
      out.path_min = min_;
      out.path_max = max_;
      out.path_avg = static_cast<double>(path_len_sum_) / out.keys;
      out.path_avg_bytes = static_cast<double>(path_bytes_ / out.keys);
    }
    return out;
  }

 private:
  TrieParams params_;
  Measurements m_;
  std::uint64_t min_ = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t max_ = 0;
  std::uint64_t path_len_sum_ = 0;
  long double path_bytes_ = 0;
};

class Builder {
 public:
  Builder(const TrieParams& params, NodeSink* sink, Accumulator* acc)
      : params_(params), sink_(sink), acc_(acc) {}

  const TrieParams& params() const { return params_; }

  // Keys in `sorted` are strictly ascending and share their first `depth`
  // labels.
  Digest build_range(std::span<const Tuple> sorted, std::size_t depth,
                     const Digest* prev_root) {
    if (sorted.size() <= params_.max_leaf) {
      Node node = Node::leaf({sorted.begin(), sorted.end()});
      if (prev_root) node.make_root(*prev_root);
      return finish(node, depth, sorted.size());
    }
    std::vector<std::pair<unsigned, Digest>> children;
    std::size_t begin = 0;
    while (begin < sorted.size()) {
      const unsigned label = label_at(sorted[begin].key, depth, params_.arity);
      std::size_t end = begin + 1;
      while (end < sorted.size() &&
             label_at(sorted[end].key, depth, params_.arity) == label)
        ++end;
      children.emplace_back(
          label, build_range(sorted.subspan(begin, end - begin), depth + 1,
                             nullptr));
      begin = end;
    }
    Node node = Node::internal(children);
    if (prev_root) node.make_root(*prev_root);
    return finish(node, depth, sorted.size());
  }

  Digest finish(const Node& node, std::size_t depth, std::uint64_t keys_below) {
    Bytes bytes = serialize_node(node, params_);
    Digest digest = hash(params_.alg, bytes);
    if (sink_) sink_->emit(digest, bytes);
    if (acc_) acc_->add(node, bytes.size(), depth, keys_below);
    return digest;
  }

 private:
  TrieParams params_;
  NodeSink* sink_;
  Accumulator* acc_;
};

std::vector<Tuple> canonical_assoc(const TrieParams& params,
                                   std::vector<Tuple> assoc) {
  for (const Tuple& t : assoc) {
    check_digest(t.key, params, "key");
    check_digest(t.value, params, "value");
  }
  std::sort(assoc.begin(), assoc.end(),
            [](const Tuple& a, const Tuple& b) { return a.key < b.key; });
  auto dup = std::adjacent_find(
      assoc.begin(), assoc.end(),
      [](const Tuple& a, const Tuple& b) { return a.key == b.key; });
  if (dup != assoc.end())
    throw Error(Errc::kDuplicateKey, "key " + dup->key.hex() + " repeated");
  return assoc;
}

// Sorted merge; entries of `changes` replace equal keys of `base`.
std::vector<Tuple> merge_tuples(std::span<const Tuple> base,
                                std::span<const Tuple> changes) {
  std::vector<Tuple> out;
  out.reserve(base.size() + changes.size());
  std::size_t i = 0, j = 0;
  while (i < base.size() || j < changes.size()) {
    if (j == changes.size() ||
        (i < base.size() && base[i].key < changes[j].key)) {
      out.push_back(base[i++]);
    } else if (i == base.size() || changes[j].key < base[i].key) {
      out.push_back(changes[j++]);
    } else {
      out.push_back(changes[j++]);
      ++i;
    }
  }
  return out;
}

class Updater {
 public:
  Updater(Builder& builder, const ObjectStore& store)
      : builder_(builder), store_(store) {}

  Digest update_node(const Digest& address, std::size_t depth,
                     std::span<const Tuple> changes, const Digest* prev_root) {
    const TrieParams& params = builder_.params();
    Node node = fetch_node(store_, address, params);
    if (node.is_root() != (prev_root != nullptr))
      throw Error(Errc::kParse, "unexpected node kind at depth " +
                                    std::to_string(depth));

    if (node.is_leaf()) {
      std::vector<Tuple> merged = merge_tuples(node.tuples, changes);
      if (!prev_root && merged == node.tuples) return address;
      return builder_.build_range(merged, depth, prev_root);
    }

    std::vector<std::pair<unsigned, Digest>> children;
    bool changed = false;
    std::size_t begin = 0;
    unsigned label = 0;
    auto next_existing = [&](unsigned from) -> int {
      for (unsigned l = from; l < params.arity; ++l)
        if (node.bitmap.test(l)) return static_cast<int>(l);
      return -1;
    };
    int existing = next_existing(0);
    while (begin < changes.size() || existing >= 0) {
      int change_label = -1;
      std::size_t end = begin;
      if (begin < changes.size()) {
        change_label = static_cast<int>(
            label_at(changes[begin].key, depth, params.arity));
        while (end < changes.size() &&
               static_cast<int>(label_at(changes[end].key, depth,
                                         params.arity)) == change_label)
          ++end;
      }
      if (existing >= 0 && (change_label < 0 || existing < change_label)) {
        label = static_cast<unsigned>(existing);
        children.emplace_back(label, *node.child(label));
        existing = next_existing(label + 1);
        continue;
      }
      label = static_cast<unsigned>(change_label);
      auto group = changes.subspan(begin, end - begin);
      Digest child;
      if (existing == change_label) {
        Digest old = *node.child(label);
        child = update_node(old, depth + 1, group, nullptr);
        changed |= child != old;
        existing = next_existing(label + 1);
      } else {
        child = builder_.build_range(group, depth + 1, nullptr);
        changed = true;
      }
      children.emplace_back(label, child);
      begin = end;
    }

    if (!prev_root && !changed) return address;
    Node next = Node::internal(children);
    if (prev_root) next.make_root(*prev_root);
    return builder_.finish(next, depth, 0);
  }

 private:
  Builder& builder_;
  const ObjectStore& store_;
};

std::vector<Tuple> canonical_changes(const TrieParams& params,
                                     std::span<const Change> changes) {
  std::vector<Tuple> tuples;
  tuples.reserve(changes.size());
  for (const Change& c : changes) {
    if (!c.value)
      throw Error(Errc::kUnsupportedOperation,
                  "deleting key " + c.key.hex() + " is not allowed");
    tuples.push_back({c.key, *c.value});
  }
  return canonical_assoc(params, std::move(tuples));
}

// Keys below a node; fills the accumulator on the way.
std::uint64_t walk_stats(const ObjectStore& store, const TrieParams& params,
                         const Digest& address, std::size_t depth,
                         Accumulator& acc) {
  Bytes bytes;
  try {
    bytes = store.get(address);
  } catch (const Error& e) {
    if (e.code() == Errc::kNotFound)
      throw Error(Errc::kMissingNode, "trie node " + address.hex());
    throw;
  }
  Node node = parse_node(bytes, params);
  std::uint64_t keys = 0;
  if (node.is_leaf()) {
    keys = node.tuples.size();
  } else {
    for (const Digest& child : node.children)
      keys += walk_stats(store, params, child, depth + 1, acc);
  }
  acc.add(node, bytes.size(), depth, keys);
  return keys;
}

void collect_tuples(const ObjectStore& store, const TrieParams& params,
                    const Digest& address, std::vector<Tuple>& out) {
  Node node = fetch_node(store, address, params);
  if (node.is_leaf()) {
    out.insert(out.end(), node.tuples.begin(), node.tuples.end());
    return;
  }
  for (const Digest& child : node.children)
    collect_tuples(store, params, child, out);
}

}  // namespace

void TrieParams::validate() const {
  if (!is_valid_arity(arity))
    throw Error(Errc::kInvalidArgument,
                "arity must be a power of two in [2, 256], got " +
                    std::to_string(arity));
  if (max_leaf < 1 || max_leaf > 256)
    throw Error(Errc::kInvalidArgument,
                "max leaf size must be in [1, 256], got " +
                    std::to_string(max_leaf));
}

Node Node::leaf(std::vector<Tuple> tuples) {
  Node n;
  n.kind = NodeKind::kLeaf;
  n.tuples = std::move(tuples);
  return n;
}

Node Node::internal(std::span<const std::pair<unsigned, Digest>> children) {
  Node n;
  n.kind = NodeKind::kInternal;
  std::vector<std::pair<unsigned, Digest>> sorted(children.begin(),
                                                  children.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [label, digest] : sorted) {
    if (label >= 256 || n.bitmap.test(label))
      throw Error(Errc::kCanonicalization,
                  "bad or repeated child label " + std::to_string(label));
    n.bitmap.set(label);
    n.children.push_back(digest);
  }
  return n;
}

Node& Node::make_root(const Digest& prev) {
  kind = is_leaf() ? NodeKind::kRootLeaf : NodeKind::kRootInternal;
  prev_root = prev;
  return *this;
}

std::optional<Digest> Node::child(unsigned label) const {
  if (is_leaf() || label >= 256 || !bitmap.test(label)) return std::nullopt;
  std::size_t rank = 0;
  for (unsigned l = 0; l < label; ++l) rank += bitmap.test(l);
  return children.at(rank);
}

std::optional<Digest> Node::find(const Digest& key) const {
  auto it = std::lower_bound(
      tuples.begin(), tuples.end(), key,
      [](const Tuple& t, const Digest& k) { return t.key < k; });
  if (it == tuples.end() || it->key != key) return std::nullopt;
  return it->value;
}

Bytes serialize_node(const Node& node, const TrieParams& params) {
  params.validate();
  const std::size_t dlen = digest_size(params.alg);
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(node.kind));

  if (node.is_leaf()) {
    std::vector<Tuple> tuples = node.tuples;
    if (tuples.empty() || tuples.size() > params.max_leaf)
      throw Error(Errc::kCanonicalization,
                  "leaf holds " + std::to_string(tuples.size()) +
                      " tuples, limit " + std::to_string(params.max_leaf));
    std::sort(tuples.begin(), tuples.end(),
              [](const Tuple& a, const Tuple& b) { return a.key < b.key; });
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      check_digest(tuples[i].key, params, "key");
      check_digest(tuples[i].value, params, "value");
      if (i > 0 && tuples[i - 1].key == tuples[i].key)
        throw Error(Errc::kCanonicalization, "duplicate key in leaf");
    }
    out.reserve(2 + tuples.size() * 2 * dlen + dlen);
    out.push_back(static_cast<std::uint8_t>(tuples.size() - 1));
    for (const Tuple& t : tuples) {
      out.insert(out.end(), t.key.view().begin(), t.key.view().end());
      out.insert(out.end(), t.value.view().begin(), t.value.view().end());
    }
  } else {
    const std::size_t count = node.bitmap.count();
    if (count == 0 || count != node.children.size())
      throw Error(Errc::kCanonicalization,
                  "bitmap marks " + std::to_string(count) + " children, node has " +
                      std::to_string(node.children.size()));
    const unsigned nbytes = params.bitmap_bytes();
    out.reserve(1 + nbytes + count * dlen + dlen);
    for (unsigned b = 0; b < nbytes; ++b) {
      std::uint8_t byte = 0;
      for (unsigned bit = 0; bit < 8; ++bit) {
        const unsigned label = b * 8 + bit;
        if (label < 256 && node.bitmap.test(label)) {
          if (label >= params.arity)
            throw Error(Errc::kCanonicalization,
                        "child label " + std::to_string(label) + " >= arity");
          byte |= static_cast<std::uint8_t>(0x80u >> bit);
        }
      }
      out.push_back(byte);
    }
    for (unsigned label = nbytes * 8; label < 256; ++label)
      if (node.bitmap.test(label))
        throw Error(Errc::kCanonicalization, "child label beyond arity");
    for (const Digest& c : node.children) {
      check_digest(c, params, "child");
      out.insert(out.end(), c.view().begin(), c.view().end());
    }
  }

  if (node.is_root()) {
    check_digest(node.prev_root, params, "prev_root");
    out.insert(out.end(), node.prev_root.view().begin(),
               node.prev_root.view().end());
  }
  return out;
}

Node parse_node(ByteView bytes, const TrieParams& params) {
  const std::size_t dlen = digest_size(params.alg);
  if (bytes.empty()) throw Error(Errc::kParse, "empty node");
  Node node;
  const std::uint8_t tag = bytes[0];
  if (tag < 0x01 || tag > 0x04)
    throw Error(Errc::kParse, "unknown node tag " + std::to_string(tag));
  node.kind = static_cast<NodeKind>(tag);
  const std::size_t tail = node.is_root() ? dlen : 0;
  std::size_t off = 1;

  if (node.is_leaf()) {
    if (bytes.size() < 2) throw Error(Errc::kParse, "truncated leaf");
    const std::size_t count = static_cast<std::size_t>(bytes[1]) + 1;
    if (count > params.max_leaf)
      throw Error(Errc::kParse, "leaf exceeds k");
    if (bytes.size() != 2 + count * 2 * dlen + tail)
      throw Error(Errc::kParse, "leaf size mismatch");
    off = 2;
    for (std::size_t i = 0; i < count; ++i) {
      Tuple t{Digest(bytes.subspan(off, dlen)),
              Digest(bytes.subspan(off + dlen, dlen))};
      off += 2 * dlen;
      if (!node.tuples.empty() && !(node.tuples.back().key < t.key))
        throw Error(Errc::kParse, "leaf keys not strictly ascending");
      node.tuples.push_back(std::move(t));
    }
  } else {
    const unsigned nbytes = params.bitmap_bytes();
    if (bytes.size() < 1 + nbytes) throw Error(Errc::kParse, "truncated bitmap");
    for (unsigned b = 0; b < nbytes; ++b) {
      for (unsigned bit = 0; bit < 8; ++bit) {
        if (bytes[1 + b] & (0x80u >> bit)) {
          const unsigned label = b * 8 + bit;
          if (label >= params.arity)
            throw Error(Errc::kParse, "bitmap padding bit set");
          node.bitmap.set(label);
        }
      }
    }
    const std::size_t count = node.bitmap.count();
    if (count == 0) throw Error(Errc::kParse, "internal node without children");
    if (bytes.size() != 1 + nbytes + count * dlen + tail)
      throw Error(Errc::kParse, "internal node size mismatch");
    off = 1 + nbytes;
    for (std::size_t i = 0; i < count; ++i, off += dlen)
      node.children.emplace_back(bytes.subspan(off, dlen));
  }
  if (node.is_root()) node.prev_root = Digest(bytes.subspan(off, dlen));
  return node;
}

Digest node_digest(const Node& node, const TrieParams& params) {
  return hash(params.alg, serialize_node(node, params));
}

std::uint64_t paper_bits(const Node& node, const TrieParams& params) {
  const std::uint64_t dbits = digest_size(params.alg) * 8;
  std::uint64_t bits = 0;
  if (node.is_leaf())
    bits = ceil_log2(params.max_leaf) + node.tuples.size() * 2 * dbits;
  else
    bits = params.arity + node.children.size() * dbits;
  if (node.is_root()) bits += dbits;
  return bits;
}

Digest build(const TrieParams& params, std::vector<Tuple> assoc,
             const Digest& prev_root, NodeSink& sink) {
  params.validate();
  if (assoc.empty())
    throw Error(Errc::kInvalidArgument, "cannot build an empty trie");
  check_digest(prev_root, params, "prev_root");
  std::vector<Tuple> sorted = canonical_assoc(params, std::move(assoc));
  Builder builder(params, &sink, nullptr);
  return builder.build_range(sorted, 0, &prev_root);
}

TrieVersion build(const TrieParams& params, std::vector<Tuple> assoc,
                  const Digest& prev_root, ObjectStore& store) {
  StoreSink sink(store);
  Digest root = build(params, std::move(assoc), prev_root, sink);
  return {params, root, &store};
}

Digest update(const TrieVersion& prev, std::span<const Change> changes,
              NodeSink& sink) {
  prev.params.validate();
  std::vector<Tuple> sorted = canonical_changes(prev.params, changes);
  Builder builder(prev.params, &sink, nullptr);
  Updater updater(builder, store_of(prev));
  return updater.update_node(prev.root_digest, 0, sorted, &prev.root_digest);
}

TrieVersion update(const TrieVersion& prev, std::span<const Change> changes,
                   ObjectStore& store) {
  StoreSink sink(store);
  Digest root = update(prev, changes, sink);
  return {prev.params, root, &store};
}

Node load_root(const TrieVersion& version) {
  Node root = fetch_node(store_of(version), version.root_digest, version.params);
  if (!root.is_root())
    throw Error(Errc::kParse, "digest " + version.root_digest.hex() +
                                  " is not a root node");
  return root;
}

std::optional<Digest> lookup(const TrieVersion& version, const Digest& key) {
  return search_path(version, key).value;
}

SearchPath search_path(const TrieVersion& version, const Digest& key) {
  const ObjectStore& store = store_of(version);
  const TrieParams& params = version.params;
  SearchPath path;
  Digest address = version.root_digest;
  for (std::size_t depth = 0;; ++depth) {
    Bytes bytes;
    try {
      bytes = store.get(address);
    } catch (const Error& e) {
      if (e.code() == Errc::kNotFound)
        throw Error(Errc::kMissingNode, "trie node " + address.hex());
      throw;
    }
    Node node = parse_node(bytes, params);
    if (node.is_root() != (depth == 0))
      throw Error(Errc::kParse, "unexpected node kind on search path");
    if (node.is_leaf()) {
      path.steps.push_back({std::move(bytes), std::nullopt});
      path.value = node.find(key);
      return path;
    }
    const unsigned label = label_at(key, depth, params.arity);
    auto child = node.child(label);
    if (!child) {
      path.steps.push_back({std::move(bytes), std::nullopt});
      return path;
    }
    path.steps.push_back({std::move(bytes), label});
    address = *child;
  }
}

std::optional<Digest> verify_search_path(const TrieParams& params,
                                         const Digest& root_digest,
                                         const Digest& key,
                                         std::span<const PathStep> steps) {
  Digest expected = root_digest;
  std::vector<unsigned> labels;
  for (std::size_t depth = 0; depth < steps.size(); ++depth) {
    const PathStep& step = steps[depth];
    if (hash(params.alg, step.node) != expected)
      throw Error(Errc::kIntegrityFailure,
                  "hash reference broken at depth " + std::to_string(depth));
    Node node = parse_node(step.node, params);
    const bool last = depth + 1 == steps.size();
    if (node.is_root() != (depth == 0))
      throw Error(Errc::kParse, "unexpected node kind on search path");
    if (node.is_leaf()) {
      if (!last || step.label)
        throw Error(Errc::kParse, "path continues past a leaf");
      for (const Tuple& t : node.tuples)
        for (std::size_t d = 0; d < labels.size(); ++d)
          if (label_at(t.key, d, params.arity) != labels[d])
            throw Error(Errc::kParse, "leaf key outside its search prefix");
      return node.find(key);
    }
    const unsigned label = label_at(key, depth, params.arity);
    auto child = node.child(label);
    if (!child) {
      if (!last || step.label)
        throw Error(Errc::kParse, "path continues past an absent branch");
      return std::nullopt;
    }
    if (last || step.label != label)
      throw Error(Errc::kParse, "path does not follow the key");
    labels.push_back(label);
    expected = *child;
  }
  throw Error(Errc::kParse, "empty search path");
}

std::vector<Tuple> all_tuples(const TrieVersion& version) {
  std::vector<Tuple> out;
  collect_tuples(store_of(version), version.params, version.root_digest, out);
  return out;
}

Measurements stats(const TrieVersion& version) {
  Accumulator acc(version.params);
  walk_stats(store_of(version), version.params, version.root_digest, 0, acc);
  return acc.finish();
}

Measurements measure_build(const TrieParams& params, std::vector<Tuple> assoc,
                           const Digest& prev_root) {
  params.validate();
  if (assoc.empty())
    throw Error(Errc::kInvalidArgument, "cannot build an empty trie");
  std::vector<Tuple> sorted = canonical_assoc(params, std::move(assoc));
  Accumulator acc(params);
  Builder builder(params, nullptr, &acc);
  builder.build_range(sorted, 0, &prev_root);
  return acc.finish();
}

}  // namespace notary
