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

#include "notary/error.hpp"

namespace notary {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid-argument";
    case Errc::kKeyExhausted: return "key-exhausted";
    case Errc::kInvalidRange: return "invalid-range";
    case Errc::kOutOfRange: return "out-of-range";
    case Errc::kCanonicalization: return "canonicalization";
    case Errc::kDuplicateKey: return "duplicate-key";
    case Errc::kUnsupportedOperation: return "unsupported-operation";
    case Errc::kMissingNode: return "missing-node";
    case Errc::kNotFound: return "not-found";
    case Errc::kIntegrityFailure: return "integrity-failure";
    case Errc::kConflict: return "conflict";
    case Errc::kIo: return "io";
    case Errc::kOversizeNote: return "oversize-note";
    case Errc::kNonContiguousSeq: return "non-contiguous-seq";
    case Errc::kNoRemoval: return "no-removal";
    case Errc::kFork: return "fork";
    case Errc::kParse: return "parse";
    case Errc::kCannotConstruct: return "cannot-construct";
  }
  return "unknown";
}

}  // namespace notary
