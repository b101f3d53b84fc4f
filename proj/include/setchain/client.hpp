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
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "setchain/crypto.hpp"
#include "setchain/element.hpp"
#include "setchain/scheduler.hpp"
#include "setchain/server.hpp"
#include "setchain/state.hpp"

namespace setchain {

/// Evidence that `element` belongs to epoch `epoch_no`: the epoch contents
/// plus at least f+1 proofs from distinct servers.
struct CommitCertificate {
  std::uint64_t epoch_no = 0;
  Element element;
  std::vector<Element> epoch_elements;
  std::vector<EpochProof> proofs;

  /// Each field as u32 BE length || bytes, in declaration order. The two
  /// list fields hold a u32 BE count followed by length-prefixed entries.
  Bytes serialize() const;
  static std::optional<CommitCertificate> parse(ByteView bytes, std::size_t max_payload = kDefaultMaxElementSize);
};

/// True iff at least f+1 proofs with pairwise distinct server signers each
/// verify over epoch_digest(i, elements).
bool verify_epoch(std::uint64_t i, std::span<const Element> elements, std::span<const EpochProof> proofs,
                  std::uint64_t f, const crypto::KeyRegistry& registry);

/// Signers whose proof in `proofs` verifies for (i, elements), ascending.
std::vector<ProcessId> valid_signers(std::uint64_t i, std::span<const Element> elements,
                                     std::span<const EpochProof> proofs, const crypto::KeyRegistry& registry);

/// element in epoch_elements and verify_epoch on the certificate's fields.
bool verify_certificate(const CommitCertificate& cert, std::uint64_t f, const crypto::KeyRegistry& registry);

/// Looks for `e` in the snapshot's history and, if its epoch is backed by
/// f+1 valid proofs in the snapshot, returns the certificate.
std::optional<CommitCertificate> certify(const SetchainSnapshot& snap, const Element& e, std::uint64_t f,
                                         const crypto::KeyRegistry& registry);

struct ConfirmTimeout {
  ProcessId server;
  std::uint64_t last_epoch_inspected = 0;
};

using ConfirmResult = std::variant<CommitCertificate, ConfirmTimeout>;

/// A client actor. Operations run on the simulation scheduler.
class Client {
 public:
  Client(ProcessId id, crypto::KeyPair key, const crypto::KeyRegistry& registry, Scheduler& scheduler)
      : id_(id), key_(key), registry_(registry), scheduler_(scheduler) {}

  ProcessId id() const { return id_; }

  Element make_element(ByteView payload, std::size_t max_payload = kDefaultMaxElementSize) const {
    return Element::sign(id_, payload, key_, max_payload);
  }

  /// One add on `server`; its answer is passed through.
  AddResult submit(const Element& e, Server& server) const { return server.add(e); }

  /// Polls server.get() every `poll_interval` until `e` is certified or
  /// `deadline` passes, then calls `done`.
  void confirm(const Element& e, const Server& server, std::uint64_t f, VirtualTime deadline,
               VirtualTime poll_interval, std::function<void(const ConfirmResult&)> done) const;

  /// confirm() against each server in turn, moving on after every timeout
  /// of `per_server_wait`, until one certifies or the list is exhausted.
  void confirm_with_retry(const Element& e, std::vector<const Server*> servers, std::uint64_t f,
                          VirtualTime per_server_wait, VirtualTime poll_interval,
                          std::function<void(const ConfirmResult&)> done) const;

 private:
  ProcessId id_;
  crypto::KeyPair key_;
  const crypto::KeyRegistry& registry_;
  Scheduler& scheduler_;
};

}  // namespace setchain
