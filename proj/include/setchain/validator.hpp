// Copyright 2026 The Setchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>

#include "setchain/crypto.hpp"
#include "setchain/element.hpp"

namespace setchain {

/// Memoizing front end for valid_element / valid_proof shared by the servers
/// of one simulation. Every answer equals the corresponding pure predicate;
/// the memo only avoids repeating identical signature checks. Decoded
/// elements are interned so equal elements share one representation.
///
/// Not thread-safe; one instance per simulation run.
class Validator {
 public:
  explicit Validator(const crypto::KeyRegistry& registry) : registry_(registry) {}

  const crypto::KeyRegistry& registry() const { return registry_; }

  /// valid_element(e). Replaces `e` with its interned instance.
  bool element(Element& e);

  /// Validates every element of `batch` not seen before in one parallel
  /// pass; subsequent element() calls on them are memo hits.
  void prevalidate(std::span<const Element> batch);

  /// valid_proof against a known epoch digest (nullptr when the epoch is not
  /// in the caller's history).
  bool proof(const EpochProof& p, const Digest* epoch_digest_value);

  /// Server signature over an arbitrary message (hash-batches).
  bool server_signature(ProcessId signer, ByteView message, const Signature& sig);

  std::uint64_t element_checks() const { return element_checks_; }
  std::uint64_t signature_verifications() const { return signature_verifications_; }

 private:
  const crypto::KeyRegistry& registry_;
  std::unordered_map<Element, bool> elements_;
  crypto::VerifyMemo memo_;
  std::uint64_t element_checks_ = 0;
  std::uint64_t signature_verifications_ = 0;
};

}  // namespace setchain
