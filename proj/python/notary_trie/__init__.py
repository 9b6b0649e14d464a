# Copyright 2026 The Notary Trie Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Notarize many Merkle ledgers through one chained trie digest."""

from ._notary import (
    HashAlg,
    Ledger,
    NotaryError,
    audit,
    bench_csv,
    hash,
    make_audit_proof,
    measure,
    simulate,
    trie_root,
    verify_audit_proof,
    verify_consistency,
)

__all__ = [
    "HashAlg",
    "Ledger",
    "NotaryError",
    "audit",
    "bench_csv",
    "hash",
    "make_audit_proof",
    "measure",
    "simulate",
    "trie_root",
    "verify_audit_proof",
    "verify_consistency",
]
